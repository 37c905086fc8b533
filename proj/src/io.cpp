#include "geneo/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace geneo {

double round12(double v) {
    if (!std::isfinite(v)) return v;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::strtod(buf, nullptr);
}

std::string format12(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

Json json_number(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    const double r = round12(v);
    // Integral values print without a trailing ".0".
    if (r == std::trunc(r) && std::abs(r) < 1e15) return static_cast<std::int64_t>(r);
    return r;
}

namespace {

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
    return out;
}

double parse_real(const std::string& text, std::size_t line) {
    if (text == "inf" || text == "+inf") return std::numeric_limits<double>::infinity();
    double v = 0.0;
    const char* first = text.data();
    if (!text.empty() && text.front() == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
        throw Error("line " + std::to_string(line) + ": bad number '" + text + "'");
    }
    return v;
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(path.string() + ": no such file");
    return in;
}

double json_real(const Json& v) {
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        throw Error("unexpected string '" + s + "' in diagram");
    }
    if (!v.is_number()) throw Error("expected a number in diagram");
    return v.get<double>();
}

}  // namespace

SampledFunction read_function_csv(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    bool header = false;
    std::vector<double> values;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty()) continue;
        if (!header) {
            if (split_csv(line) != std::vector<std::string>{"index", "value"}) {
                throw Error("function CSV must start with header 'index,value'");
            }
            header = true;
            continue;
        }
        const auto cells = split_csv(line);
        if (cells.size() != 2) throw Error("line " + std::to_string(lineno) + ": expected 2 columns");
        const double idx = parse_real(cells[0], lineno);
        if (idx != static_cast<double>(values.size())) {
            throw Error("line " + std::to_string(lineno) + ": expected index " +
                        std::to_string(values.size()));
        }
        values.push_back(parse_real(cells[1], lineno));
    }
    if (!header) throw Error("empty function CSV");
    const std::size_t n = values.size();
    return SampledFunction(GridCircle(n), std::move(values));
}

SampledFunction read_function_csv(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_function_csv(in);
}

void write_function_csv(std::ostream& out, const SampledFunction& f) {
    out << "index,value\n";
    for (std::size_t i = 0; i < f.size(); ++i) out << i << ',' << format12(f[i]) << '\n';
}

Json diagram_to_json(const PersistenceDiagram& d) {
    Json j;
    j["finite"] = Json::array();
    for (const auto& p : d.finite) j["finite"].push_back({json_number(p.birth), json_number(p.death)});
    j["essential"] = Json::array();
    for (double b : d.essential) j["essential"].push_back(json_number(b));
    return j;
}

PersistenceDiagram diagram_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("finite") || !j.contains("essential")) {
        throw Error("diagram JSON needs 'finite' and 'essential'");
    }
    std::vector<PersistencePair> finite;
    std::vector<double> essential;
    for (const auto& p : j.at("finite")) {
        if (!p.is_array() || p.size() != 2) throw Error("finite points must be [birth, death]");
        const double b = json_real(p[0]);
        const double d = json_real(p[1]);
        if (std::isinf(d)) {
            essential.push_back(b);
        } else {
            finite.push_back({b, d});
        }
    }
    for (const auto& b : j.at("essential")) essential.push_back(json_real(b));
    return PersistenceDiagram::normalized(std::move(finite), std::move(essential));
}

void write_diagram_csv(std::ostream& out, const PersistenceDiagram& d) {
    out << "birth,death\n";
    for (const auto& p : d.finite) out << format12(p.birth) << ',' << format12(p.death) << '\n';
    for (double b : d.essential) out << format12(b) << ",inf\n";
}

PersistenceDiagram read_diagram_csv(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    bool header = false;
    std::vector<PersistencePair> finite;
    std::vector<double> essential;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty()) continue;
        if (!header) {
            if (split_csv(line) != std::vector<std::string>{"birth", "death"}) {
                throw Error("diagram CSV must start with header 'birth,death'");
            }
            header = true;
            continue;
        }
        const auto cells = split_csv(line);
        if (cells.size() != 2) throw Error("line " + std::to_string(lineno) + ": expected 2 columns");
        const double b = parse_real(cells[0], lineno);
        const double d = parse_real(cells[1], lineno);
        if (std::isinf(d)) {
            essential.push_back(b);
        } else {
            finite.push_back({b, d});
        }
    }
    if (!header) throw Error("empty diagram CSV");
    return PersistenceDiagram::normalized(std::move(finite), std::move(essential));
}

PersistenceDiagram read_diagram(const std::filesystem::path& path) {
    auto in = open_input(path);
    if (path.extension() == ".csv") return read_diagram_csv(in);
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error(path.string() + ": malformed diagram JSON: " + e.what());
    }
    try {
        return diagram_from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw Error(path.string() + ": malformed diagram: " + e.what());
    }
}

Json matching_to_json(const BottleneckResult& r, const PersistenceDiagram& a,
                      const PersistenceDiagram& b) {
    Json pairs = Json::array();
    for (const auto& m : r.matching.pairs) {
        Json p;
        auto point = [&](const std::optional<std::size_t>& idx, const PersistenceDiagram& d) -> Json {
            if (!idx) return "diagonal";
            if (m.essential) return Json::array({json_number(d.essential[*idx]), "inf"});
            return Json::array({json_number(d.finite[*idx].birth), json_number(d.finite[*idx].death)});
        };
        p["from"] = point(m.left, a);
        p["to"] = point(m.right, b);
        p["cost"] = json_number(m.cost);
        pairs.push_back(std::move(p));
    }
    Json j;
    j["distance"] = json_number(r.distance);
    j["matching"] = std::move(pairs);
    return j;
}

namespace {

const char* kind_name(OpExpr::Kind k) {
    switch (k) {
    case OpExpr::Kind::identity: return "identity";
    case OpExpr::Kind::rot: return "rotation";
    case OpExpr::Kind::refl: return "reflection";
    case OpExpr::Kind::power_mean: return "power_mean";
    case OpExpr::Kind::lipschitz: return "lipschitz_combine";
    case OpExpr::Kind::series: return "series";
    case OpExpr::Kind::compose: return "compose";
    case OpExpr::Kind::unchecked: return "unchecked";
    }
    return "identity";
}

Json angle_json(const Angle& a) { return {{"pi_num", a.num}, {"pi_den", a.den}}; }

Angle angle_from(const Json& j) {
    return Angle::make(j.at("pi_num").get<std::int64_t>(), j.at("pi_den").get<std::int64_t>());
}

}  // namespace

Json expr_to_json(const OpExpr& e) {
    Json j;
    j["kind"] = kind_name(e.kind);
    switch (e.kind) {
    case OpExpr::Kind::rot:
    case OpExpr::Kind::refl:
        j["angle"] = angle_json(e.angle);
        break;
    case OpExpr::Kind::power_mean:
        j["p"] = e.p;
        break;
    case OpExpr::Kind::lipschitz:
        switch (e.map) {
        case OpExpr::MapKind::max: j["map"] = "max"; break;
        case OpExpr::MapKind::min: j["map"] = "min"; break;
        case OpExpr::MapKind::proj:
            j["map"] = "proj";
            j["coordinate"] = e.coordinate;
            break;
        case OpExpr::MapKind::convex:
            j["map"] = "convex";
            j["weights"] = e.weights;
            break;
        }
        break;
    case OpExpr::Kind::series:
        j["coefficients"] = {{"kind", "geometric"}, {"c", e.c}, {"r", e.r}};
        if (e.family == OpExpr::FamilyKind::rotation) {
            j["family"] = {{"kind", "rotation"}, {"step", angle_json(e.angle)}};
        } else {
            j["family"] = {{"kind", "constant"}};
        }
        if (e.eps) j["eps"] = *e.eps;
        break;
    default:
        break;
    }
    if (!e.children.empty()) {
        j["children"] = Json::array();
        for (const auto& c : e.children) j["children"].push_back(expr_to_json(c));
    }
    return j;
}

OpExpr expr_from_json(const Json& j) {
    try {
        OpExpr e;
        const auto kind = j.at("kind").get<std::string>();
        if (j.contains("children")) {
            for (const auto& c : j.at("children")) e.children.push_back(expr_from_json(c));
        }
        if (kind == "identity") {
            e.kind = OpExpr::Kind::identity;
        } else if (kind == "rotation" || kind == "reflection") {
            e.kind = kind == "rotation" ? OpExpr::Kind::rot : OpExpr::Kind::refl;
            e.angle = angle_from(j.at("angle"));
        } else if (kind == "power_mean") {
            e.kind = OpExpr::Kind::power_mean;
            e.p = j.at("p").get<double>();
        } else if (kind == "lipschitz_combine") {
            e.kind = OpExpr::Kind::lipschitz;
            const auto map = j.at("map").get<std::string>();
            if (map == "max") {
                e.map = OpExpr::MapKind::max;
            } else if (map == "min") {
                e.map = OpExpr::MapKind::min;
            } else if (map == "proj") {
                e.map = OpExpr::MapKind::proj;
                e.coordinate = j.at("coordinate").get<std::size_t>();
            } else if (map == "convex") {
                e.map = OpExpr::MapKind::convex;
                e.weights = j.at("weights").get<std::vector<double>>();
            } else {
                throw Error("unknown lipschitz map '" + map + "'");
            }
        } else if (kind == "series") {
            e.kind = OpExpr::Kind::series;
            const auto& co = j.at("coefficients");
            if (co.at("kind").get<std::string>() != "geometric") throw Error("only geometric coefficients");
            e.c = co.at("c").get<double>();
            e.r = co.at("r").get<double>();
            const auto& fam = j.at("family");
            const auto fk = fam.at("kind").get<std::string>();
            if (fk == "rotation") {
                e.family = OpExpr::FamilyKind::rotation;
                e.angle = angle_from(fam.at("step"));
            } else if (fk == "constant") {
                e.family = OpExpr::FamilyKind::constant;
            } else {
                throw Error("unknown family kind '" + fk + "'");
            }
            if (j.contains("eps")) e.eps = j.at("eps").get<double>();
        } else if (kind == "compose") {
            e.kind = OpExpr::Kind::compose;
        } else if (kind == "unchecked") {
            e.kind = OpExpr::Kind::unchecked;
        } else {
            throw Error("unknown operator kind '" + kind + "'");
        }
        const std::size_t want = e.kind == OpExpr::Kind::compose   ? 2
                                 : e.kind == OpExpr::Kind::unchecked ? 1
                                 : (e.kind == OpExpr::Kind::series &&
                                    e.family == OpExpr::FamilyKind::constant)
                                     ? 1
                                     : 0;
        const bool variadic = e.kind == OpExpr::Kind::power_mean || e.kind == OpExpr::Kind::lipschitz;
        if (variadic ? e.children.empty() : e.children.size() != want) {
            throw Error("wrong number of children for '" + kind + "'");
        }
        return e;
    } catch (const nlohmann::json::exception& ex) {
        throw Error(std::string("malformed operator JSON: ") + ex.what());
    }
}

}  // namespace geneo
