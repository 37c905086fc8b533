#include "geneo/approximation.hpp"

#include <algorithm>
#include <ostream>

#include "geneo/matching.hpp"
#include "geneo/opdsl.hpp"
#include "geneo/persistence.hpp"

namespace geneo {

std::vector<NamedOperator> named(std::vector<Operator> ops) {
    std::vector<NamedOperator> out;
    out.reserve(ops.size());
    for (auto& op : ops) {
        std::string id = describe(op);
        out.push_back({std::move(id), std::move(op)});
    }
    return out;
}

namespace {

void require_validated(std::span<const NamedOperator> family) {
    if (family.empty()) throw Error("lower bound needs a nonempty family");
    for (const auto& f : family) {
        if (!f.op.validated()) throw Error("lower bound requires validated GENEOs (got '" + f.id + "')");
    }
}

}  // namespace

LowerBound lower_bound(std::span<const NamedOperator> family, const SampledFunction& phi1,
                       const SampledFunction& phi2) {
    require_validated(family);
    LowerBound best;
    best.value = -1.0;
    for (std::size_t i = 0; i < family.size(); ++i) {
        const auto& op = family[i].op;
        const double d =
            bottleneck(sublevel_diagram(op.apply(phi1)), sublevel_diagram(op.apply(phi2))).distance;
        if (d > best.value) best = {d, i, family[i].id};
    }
    return best;
}

std::vector<GroupElement> centralizer(const Group& group) {
    std::vector<GroupElement> out;
    const Group all = Group::dihedral(group.grid());
    for (const auto& g0 : all.elements()) {
        bool ok = true;
        for (const auto& g : group.elements()) {
            if (!commute(g0, g)) {
                ok = false;
                break;
            }
        }
        if (ok) out.push_back(g0);
    }
    return out;
}

namespace {

class TreeSampler {
public:
    TreeSampler(Rng& rng, const Group& group, const FunctionSpace& space)
        : rng_(rng), group_(group), space_(space), central_(centralizer(group)) {
        for (const auto& g : central_) {
            if (!g.reflects()) rotations_.push_back(g);
        }
    }

    Operator sample(int depth) {
        if (depth <= 1) return leaf();
        std::uniform_int_distribution<int> pick(0, 5);
        switch (pick(rng_)) {
        case 0:
            return leaf();
        case 1: {
            static constexpr double kExponents[] = {1.0, 2.0, 3.0};
            std::uniform_int_distribution<int> pe(0, 2);
            const double p = kExponents[pe(rng_)];
            return power_mean(p, children(depth - 1, 1, 3));
        }
        case 2: {
            auto kids = children(depth - 1, 2, 2);
            std::bernoulli_distribution use_max(0.5);
            auto map = use_max(rng_) ? LipschitzMap::max(kids.size()) : LipschitzMap::min(kids.size());
            return lipschitz_combine(std::move(map), std::move(kids));
        }
        case 3: {
            std::uniform_real_distribution<double> ratio(0.2, 0.8);
            std::uniform_real_distribution<double> share(0.2, 1.0);
            const double r = ratio(rng_);
            const double c = share(rng_) * (1.0 - r);  // total c / (1 - r) <= 1
            auto coeffs = CoefficientSequence::geometric(c, r);
            std::bernoulli_distribution rotating(0.5);
            if (rotating(rng_)) {
                std::uniform_int_distribution<std::size_t> pr(0, rotations_.size() - 1);
                return series(std::move(coeffs),
                              OperatorSequence::rotations(rotations_[pr(rng_)], group_, space_.bound));
            }
            return series(std::move(coeffs), OperatorSequence::constant(sample(depth - 1), space_.bound));
        }
        case 4:
            return compose(sample(depth - 1), sample(depth - 1));
        default:
            return sample(depth - 1);
        }
    }

private:
    Operator leaf() {
        std::bernoulli_distribution ident(0.3);
        if (ident(rng_)) return Operator::identity();
        std::uniform_int_distribution<std::size_t> pg(0, central_.size() - 1);
        return precompose(central_[pg(rng_)], group_);
    }

    std::vector<Operator> children(int depth, int lo, int hi) {
        std::uniform_int_distribution<int> count(lo, hi);
        const int k = count(rng_);
        std::vector<Operator> out;
        for (int i = 0; i < k; ++i) out.push_back(sample(depth));
        return out;
    }

    Rng& rng_;
    const Group& group_;
    const FunctionSpace& space_;
    std::vector<GroupElement> central_;
    std::vector<GroupElement> rotations_;
};

}  // namespace

Operator random_operator(Rng& rng, const Group& group, const FunctionSpace& space, int max_depth) {
    return TreeSampler(rng, group, space).sample(max_depth);
}

GapReport gap_report(const GapConfig& config, std::span<const SampledFunction> corpus,
                     const Group& group, const FunctionSpace& space) {
    GapReport report;
    report.config = config;
    std::sort(report.config.family_sizes.begin(), report.config.family_sizes.end());
    const std::size_t largest =
        report.config.family_sizes.empty() ? 0 : report.config.family_sizes.back();

    std::vector<NamedOperator> family = config.base_family;
    if (!family.empty()) require_validated(family);
    if (family.empty() && !report.config.family_sizes.empty() && report.config.family_sizes.front() == 0) {
        throw Error("family size 0 with an empty base family");
    }
    Rng rng(config.seed);
    TreeSampler sampler(rng, group, space);
    for (std::size_t i = 0; i < largest; ++i) {
        Operator op = sampler.sample(config.max_depth);
        family.push_back({"random#" + std::to_string(i) + " " + describe(op), std::move(op)});
    }
    for (const auto& f : family) report.family.push_back(f.id);

    // Diagrams per operator and corpus function.
    std::vector<std::vector<PersistenceDiagram>> dgm(family.size());
    for (std::size_t k = 0; k < family.size(); ++k) {
        for (const auto& phi : corpus) dgm[k].push_back(sublevel_diagram(family[k].op.apply(phi)));
    }

    const std::size_t base = config.base_family.size();
    for (std::size_t a = 0; a < corpus.size(); ++a) {
        for (std::size_t b = a + 1; b < corpus.size(); ++b) {
            const double dg = natural_pseudo_distance(corpus[a], corpus[b], group).value;
            double best = -1.0;
            std::string witness;
            std::size_t done = 0;
            for (std::size_t m : report.config.family_sizes) {
                for (; done < base + m; ++done) {
                    const double d = bottleneck(dgm[done][a], dgm[done][b]).distance;
                    if (d > best) {
                        best = d;
                        witness = family[done].id;
                    }
                }
                report.records.push_back({m, a, b, dg, best, witness, dg - best});
            }
        }
    }

    for (std::size_t m : report.config.family_sizes) {
        GapStats s{m, 0.0, 0.0};
        std::size_t count = 0;
        for (const auto& r : report.records) {
            if (r.family_size != m) continue;
            s.max_gap = count == 0 ? r.gap : std::max(s.max_gap, r.gap);
            s.mean_gap += r.gap;
            ++count;
        }
        if (count) s.mean_gap /= static_cast<double>(count);
        report.stats.push_back(s);
    }
    return report;
}

Json gap_report_json(const GapReport& report) {
    Json j;
    j["seed"] = report.config.seed;
    j["max_depth"] = report.config.max_depth;
    j["family_sizes"] = report.config.family_sizes;
    j["base_family_size"] = report.config.base_family.size();
    j["family"] = report.family;
    Json recs = Json::array();
    for (const auto& r : report.records) {
        recs.push_back({{"family_size", r.family_size},
                        {"first", r.first},
                        {"second", r.second},
                        {"d_G", json_number(r.natural_distance)},
                        {"bound", json_number(r.bound)},
                        {"witness", r.witness},
                        {"gap", json_number(r.gap)}});
    }
    j["records"] = std::move(recs);
    Json stats = Json::array();
    for (const auto& s : report.stats) {
        stats.push_back({{"family_size", s.family_size},
                         {"max_gap", json_number(s.max_gap)},
                         {"mean_gap", json_number(s.mean_gap)}});
    }
    j["stats"] = std::move(stats);
    return j;
}

void write_gap_csv(std::ostream& out, const GapReport& report) {
    out << "# seed=" << report.config.seed << " max_depth=" << report.config.max_depth << '\n';
    out << "family_size,first,second,d_G,bound,gap,witness\n";
    for (const auto& r : report.records) {
        out << r.family_size << ',' << r.first << ',' << r.second << ',' << format12(r.natural_distance)
            << ',' << format12(r.bound) << ',' << format12(r.gap) << ",\"" << r.witness << "\"\n";
    }
}

}  // namespace geneo
