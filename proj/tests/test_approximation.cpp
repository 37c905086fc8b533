#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "geneo/approximation.hpp"
#include "geneo/opdsl.hpp"

using namespace geneo;

namespace {

const GridCircle kGrid(360);
const Group kRotations = Group::cyclic(kGrid);
const FunctionSpace kSpace = FunctionSpace::unit_lipschitz();

std::vector<NamedOperator> quarter_turn_family() {
    std::vector<NamedOperator> out;
    for (const char* s : {"id", "rot(pi/2)", "Mp(1; id, rot(pi/2))"}) {
        out.push_back({s, parse_operator(s, kRotations, kSpace)});
    }
    return out;
}

}  // namespace

TEST(LowerBound, IdentityOnEqualFunctions) {
    const auto fam = named({Operator::identity()});
    const auto lb = lower_bound(fam, abs_sin(kGrid), abs_sin(kGrid));
    EXPECT_EQ(lb.value, 0.0);
    EXPECT_EQ(lb.id, "id");
}

TEST(LowerBound, QuarterTurnFamily) {
    const auto fam = quarter_turn_family();
    const auto phi = abs_sin(kGrid);
    const auto psi = sin_sq(kGrid);

    const std::span<const NamedOperator> first_two(fam.data(), 2);
    EXPECT_LE(lower_bound(first_two, phi, psi).value, 1e-9);

    const auto lb = lower_bound(fam, phi, psi);
    EXPECT_NEAR(lb.value, (std::sqrt(2.0) - 1.0) / 4.0, 1e-12);
    EXPECT_EQ(lb.argmax, 2u);
    EXPECT_EQ(lb.id, "Mp(1; id, rot(pi/2))");
    EXPECT_LE(lb.value, natural_pseudo_distance(phi, psi, kRotations).value);
}

TEST(LowerBound, RejectsUncheckedAndEmpty) {
    const auto u = parse_operator("unchecked refl(0)", kRotations, kSpace);
    try {
        lower_bound(named({Operator::identity(), u}), abs_sin(kGrid), sin_sq(kGrid));
        FAIL() << "expected an error";
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("lower bound requires validated GENEOs"), std::string::npos);
    }
    EXPECT_THROW(lower_bound(std::span<const NamedOperator>{}, abs_sin(kGrid), sin_sq(kGrid)), Error);
}

TEST(LowerBound, OrbitCollapse) {
    Rng rng(501);
    const GridCircle grid(36);
    const Group rot = Group::cyclic(grid);
    std::vector<Operator> ops;
    for (int i = 0; i < 20; ++i) ops.push_back(random_operator(rng, rot, kSpace, 4));
    const auto fam = named(std::move(ops));
    for (int t = 0; t < 10; ++t) {
        const auto f = random_lipschitz_function(rng, grid);
        for (std::int64_t s : {1, 7, 18}) {
            EXPECT_EQ(lower_bound(fam, f, act(f, GroupElement::rotation(36, s))).value, 0.0);
        }
    }
}

TEST(LowerBound, SupersetFamiliesNeverDecrease) {
    Rng rng(502);
    const GridCircle grid(36);
    const Group rot = Group::cyclic(grid);
    std::vector<Operator> ops;
    for (int i = 0; i < 12; ++i) ops.push_back(random_operator(rng, rot, kSpace, 4));
    const auto fam = named(std::move(ops));
    const auto f = random_lipschitz_function(rng, grid);
    const auto g = random_lipschitz_function(rng, grid);
    double prev = 0.0;
    for (std::size_t m = 1; m <= fam.size(); ++m) {
        const double v = lower_bound(std::span(fam.data(), m), f, g).value;
        EXPECT_GE(v, prev);
        prev = v;
    }
}

TEST(Centralizer, CyclicAndDihedral) {
    const GridCircle grid(12);
    EXPECT_EQ(centralizer(Group::cyclic(grid)).size(), 12u);
    // Only the identity and the half turn commute with all of D_12.
    EXPECT_EQ(centralizer(Group::dihedral(grid)).size(), 2u);
    EXPECT_EQ(centralizer(Group::trivial(grid)).size(), 24u);
}

TEST(RandomOperator, DepthAndValidation) {
    Rng rng(503);
    const GridCircle grid(24);
    std::function<int(const Operator&)> depth = [&](const Operator& op) {
        int d = 0;
        for (const auto& c : op.children()) d = std::max(d, depth(c));
        if (op.kind() == Operator::Kind::series && op.family().kind() == OperatorSequence::Kind::constant) {
            d = std::max(d, depth(op.family().base()));
        }
        return d + 1;
    };
    for (const Group& g : {Group::cyclic(grid), Group::dihedral(grid)}) {
        for (int t = 0; t < 200; ++t) {
            const auto op = random_operator(rng, g, kSpace, 4);
            EXPECT_TRUE(op.validated());
            EXPECT_LE(depth(op), 4);
        }
    }
}

TEST(GapReport, OrbitCorpusHasZeroGaps) {
    const GridCircle grid(36);
    const Group rot = Group::cyclic(grid);
    const auto f = abs_sin(grid);
    const std::vector<SampledFunction> corpus{f, act(f, GroupElement::rotation(36, 5))};
    GapConfig cfg;
    cfg.seed = 7;
    const auto report = gap_report(cfg, corpus, rot, kSpace);
    ASSERT_FALSE(report.records.empty());
    for (const auto& r : report.records) {
        EXPECT_EQ(r.natural_distance, 0.0);
        EXPECT_EQ(r.bound, 0.0);
        EXPECT_EQ(r.gap, 0.0);
    }
}

TEST(GapReport, NestedFamiliesAndQuarterTurnBound) {
    const std::vector<SampledFunction> corpus{abs_sin(kGrid), sin_sq(kGrid)};
    GapConfig cfg;
    cfg.seed = 11;
    const auto without = gap_report(cfg, corpus, kRotations, kSpace);
    ASSERT_EQ(without.stats.size(), 3u);
    double prev = -1.0;
    for (const auto& r : without.records) {
        EXPECT_GE(r.gap, -1e-9);
        EXPECT_GE(r.bound, prev);
        prev = r.bound;
    }

    cfg.base_family = quarter_turn_family();
    const auto with = gap_report(cfg, corpus, kRotations, kSpace);
    for (const auto& r : with.records) {
        EXPECT_NEAR(r.natural_distance, 0.25, 1e-12);
        EXPECT_LE(r.gap, 0.25 - (std::sqrt(2.0) - 1.0) / 4.0 + 1e-12);
        EXPECT_GE(r.gap, -1e-9);
    }
}

TEST(GapReport, DeterministicOutputs) {
    const GridCircle grid(24);
    const Group rot = Group::cyclic(grid);
    Rng rng(504);
    std::vector<SampledFunction> corpus;
    for (int i = 0; i < 3; ++i) corpus.push_back(random_lipschitz_function(rng, grid));
    GapConfig cfg;
    cfg.seed = 99;
    const auto a = gap_report(cfg, corpus, rot, kSpace);
    const auto b = gap_report(cfg, corpus, rot, kSpace);
    EXPECT_EQ(gap_report_json(a).dump(), gap_report_json(b).dump());
    std::ostringstream ca, cb;
    write_gap_csv(ca, a);
    write_gap_csv(cb, b);
    EXPECT_EQ(ca.str(), cb.str());
    EXPECT_EQ(gap_report_json(a).at("seed"), 99);
}
