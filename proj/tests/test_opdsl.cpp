#include <gtest/gtest.h>

#include <random>
#include <string>
#include <vector>

#include "geneo/approximation.hpp"
#include "geneo/opdsl.hpp"
#include "geneo/validate.hpp"

using namespace geneo;

namespace {

const GridCircle kGrid(360);
const Group kRotations = Group::cyclic(kGrid);
const FunctionSpace kSpace = FunctionSpace::unit_lipschitz();

const std::vector<std::string> kCorpus{
    "id",
    "rot(pi/2)",
    "rot(-pi/2)",
    "rot(2pi/360)",
    "rot(3*pi/4)",
    "rot(0)",
    "refl(pi)",
    "Mp(1; id, rot(pi/2))",
    "Mp(3; id, rot(pi/2))",
    "Mp(2.5; id)",
    "L(max; id, rot(pi/2))",
    "L(min; id, rot(pi), rot(pi/3))",
    "L(proj:2; id, rot(pi/2))",
    "L(convex:0.25,0.5; id, rot(pi/2))",
    "series(geom(0.5,0.5), rot-family(pi/2); eps=1e-9)",
    "series(geom(0.25, 0.5), const-family(Mp(2; id, rot(pi/4))))",
    "compose(id, id)",
    "compose(Mp(1; id, rot(pi/2)), L(max; rot(pi/6), id))",
    "unchecked Mp(0.5; id, rot(pi/2))",
    "unchecked refl(0)",
    "  Mp( 1 ;id ,rot( pi / 2 ) )  ",
};

}  // namespace

TEST(Parse, MeanOfQuarterTurns) {
    const auto e = parse("Mp(1; id, rot(pi/2))", kGrid);
    EXPECT_EQ(e.kind, OpExpr::Kind::power_mean);
    EXPECT_EQ(e.p, 1.0);
    ASSERT_EQ(e.children.size(), 2u);
    EXPECT_EQ(e.children[0].kind, OpExpr::Kind::identity);
    EXPECT_EQ(e.children[1].kind, OpExpr::Kind::rot);
    EXPECT_EQ(e.children[1].angle.shift_on(360), 90);

    const auto op = elaborate(e, kRotations, kSpace);
    EXPECT_EQ(op.kind(), Operator::Kind::power_mean);
    EXPECT_EQ(op.children()[1].element(), GroupElement::rotation(360, 90));
}

TEST(Parse, AngleNotOnGrid) {
    EXPECT_NO_THROW(parse("rot(pi/7)"));
    try {
        parse("rot(pi/7)", kGrid);
        FAIL() << "expected an error";
    } catch (const ElaborationError& e) {
        EXPECT_NE(std::string(e.what()).find("not a multiple of pi/180"), std::string::npos) << e.what();
    }
    EXPECT_THROW(parse_operator("rot(pi/7)", kRotations, kSpace), ElaborationError);
}

TEST(Parse, SeriesTruncationFromTail) {
    const auto op = parse_operator("series(geom(0.5,0.5), rot-family(pi/2); eps=1e-9)", kRotations, kSpace);
    ASSERT_EQ(op.kind(), Operator::Kind::series);
    // tail(K) B = 0.5^K with B = 1; least K with 0.5^K <= 1e-9.
    std::size_t k = 0;
    double t = 1.0;
    while (t > 1e-9) {
        t *= 0.5;
        ++k;
    }
    EXPECT_EQ(op.terms(), k);
    EXPECT_EQ(op.terms(), 30u);
}

TEST(Elaborate, Examples) {
    EXPECT_EQ(parse_operator("id", kRotations, kSpace).kind(), Operator::Kind::identity);
    try {
        parse_operator("refl(0)", kRotations, kSpace);
        FAIL() << "expected an error";
    } catch (const ElaborationError& e) {
        EXPECT_NE(std::string(e.what()).find("does not commute with G"), std::string::npos) << e.what();
    }
    const auto u = parse_operator("unchecked refl(0)", kRotations, kSpace);
    EXPECT_FALSE(u.validated());

    Rng rng(301);
    const auto cid = parse_operator("compose(id, id)", kRotations, kSpace);
    for (int i = 0; i < 10; ++i) {
        const auto f = random_lipschitz_function(rng, kGrid);
        EXPECT_EQ(apply(cid, f), f);
    }
}

TEST(Elaborate, ExponentBelowOneNeedsUnchecked) {
    EXPECT_THROW(parse_operator("Mp(0.5; id, rot(pi/2))", kRotations, kSpace), ElaborationError);
    const auto op = parse_operator("unchecked Mp(0.5; id, rot(pi/2))", kRotations, kSpace);
    EXPECT_FALSE(op.validated());
    EXPECT_THROW(lower_bound(named({op}), abs_sin(kGrid), sin_sq(kGrid)), Error);
}

TEST(Elaborate, OtherConstructorErrors) {
    EXPECT_THROW(parse_operator("series(geom(0.9,0.5), rot-family(pi/2))", kRotations, kSpace),
                 ElaborationError);
    EXPECT_THROW(parse_operator("L(proj:3; id, id)", kRotations, kSpace), ElaborationError);
    EXPECT_THROW(parse_operator("L(convex:0.75,0.5; id, id)", kRotations, kSpace), ElaborationError);
    EXPECT_THROW(parse_operator("series(geom(0.5,0.5), rot-family(pi/2))", Group::dihedral(kGrid), kSpace),
                 ElaborationError);
    EXPECT_TRUE(parse_operator("series(geom(0.5,0.5), rot-family(pi/2))", kRotations, kSpace).validated());
}

TEST(Print, RoundTripsCorpus) {
    for (const auto& s : kCorpus) {
        const auto e = parse(s);
        const auto text = print(e);
        EXPECT_EQ(parse(text), e) << s << " -> " << text;
        EXPECT_EQ(print(parse(text)), text);
    }
    EXPECT_EQ(print(parse("  Mp( 1 ;id ,rot( pi / 2 ) )  ")), "Mp(1; id, rot(pi/2))");
}

TEST(Print, RoundTripsRandomTrees) {
    Rng rng(302);
    const GridCircle grid(24);
    const Group rot = Group::cyclic(grid);
    for (int t = 0; t < 300; ++t) {
        const auto op = random_operator(rng, rot, kSpace, 4);
        const auto text = describe(op);
        const auto e = parse(text, grid);
        EXPECT_EQ(e, to_expr(op)) << text;
        const auto back = elaborate(e, rot, kSpace);
        const auto f = random_lipschitz_function(rng, grid);
        EXPECT_EQ(apply(back, f), apply(op, f)) << text;
    }
}

TEST(ParseError, CarriesPositionAndExpectation) {
    try {
        parse("Mp(1; id, rot(pi/2)");
        FAIL() << "expected an error";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.offset(), 19u);
        EXPECT_FALSE(e.expected().empty());
    }
    try {
        parse("L(median; id)");
        FAIL() << "expected an error";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.offset(), 2u);
    }
    for (const char* bad : {"", "id id", "rot()", "rot(pi/0)", "Mp(; id)", "Mp(1)", "compose(id)",
                            "series(geom(0.5), id)", "unchecked", "rot(1.5)", "\xff", "L(proj:-1; id)"}) {
        EXPECT_THROW(parse(bad), ParseError) << bad;
    }
}

TEST(ParseError, FuzzNeverEscapesAsAnythingElse) {
    Rng rng(303);
    const std::string alphabet = "idrotreflMpLmaxinprojconvexseriesgeomfamilycompose()[],;:=*/-+.0123456789 epi\t\n";
    std::uniform_int_distribution<std::size_t> len(0, 40);
    std::uniform_int_distribution<int> byte(0, 255);
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
    std::uniform_int_distribution<std::size_t> which(0, kCorpus.size() - 1);
    for (int t = 0; t < 20000; ++t) {
        std::string s;
        switch (t % 3) {
        case 0:
            for (std::size_t k = len(rng); k > 0; --k) s.push_back(static_cast<char>(byte(rng)));
            break;
        case 1:
            for (std::size_t k = len(rng); k > 0; --k) s.push_back(alphabet[pick(rng)]);
            break;
        default: {
            // Mutations of valid expressions.
            s = kCorpus[which(rng)];
            std::uniform_int_distribution<std::size_t> pos(0, s.size());
            for (int m = 0; m < 3; ++m) {
                const std::size_t p = pos(rng);
                if (p < s.size() && m % 2 == 0) {
                    s.erase(p, 1);
                } else {
                    s.insert(s.begin() + static_cast<std::ptrdiff_t>(std::min(p, s.size())), alphabet[pick(rng)]);
                }
            }
        }
        }
        try {
            const auto e = parse(s);
            EXPECT_EQ(parse(print(e)), e) << s;
        } catch (const ParseError& e) {
            EXPECT_LE(e.offset(), s.size()) << s;
        }
    }
}

TEST(ParseError, DeepNestingIsRejected) {
    std::string s;
    for (int i = 0; i < 5000; ++i) s += "compose(id, ";
    s += "id";
    for (int i = 0; i < 5000; ++i) s += ")";
    EXPECT_THROW(parse(s), ParseError);
}
