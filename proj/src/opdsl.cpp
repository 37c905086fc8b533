#include "geneo/opdsl.hpp"

#include <charconv>
#include <cctype>
#include <cmath>
#include <numeric>
#include <system_error>

namespace geneo {

// ---------------------------------------------------------------------------
// Angle

Angle Angle::make(std::int64_t num, std::int64_t den) {
    if (den == 0) throw Error("angle with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const std::int64_t g = std::gcd(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    if (num == 0) den = 1;
    return Angle{num, den};
}

std::int64_t Angle::shift_on(std::size_t n) const {
    // angle / (2 pi) * n = num * n / (2 den)
    const auto nn = static_cast<std::int64_t>(n);
    const std::int64_t top = num * nn;
    const std::int64_t bottom = 2 * den;
    if (top % bottom != 0) {
        Angle step = Angle::make(2, nn);
        auto text = [](const Angle& a) {
            OpExpr e;
            e.kind = OpExpr::Kind::rot;
            e.angle = a;
            std::string s = print(e);
            return s.substr(4, s.size() - 5);
        };
        throw ElaborationError("angle " + text(*this) + " is not a multiple of " + text(step) +
                               " (grid n=" + std::to_string(n) + ")");
    }
    return top / bottom;
}

Angle Angle::from_shift(std::int64_t shift, std::size_t n) {
    return make(2 * shift, static_cast<std::int64_t>(n));
}

ParseError::ParseError(const std::string& message, std::size_t offset, std::vector<std::string> expected)
    : Error(message), offset_(offset), expected_(std::move(expected)) {}

// ---------------------------------------------------------------------------
// Lexer

namespace {

enum class Tok { ident, number, lparen, rparen, comma, semi, colon, equals, slash, star, minus, end, bad };

struct Token {
    Tok kind;
    std::string_view text;
    std::size_t offset;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}
bool digit(char c) { return c >= '0' && c <= '9'; }

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        const std::size_t start = pos_;
        if (pos_ >= src_.size()) return {Tok::end, {}, start};
        const char c = src_[pos_];
        auto single = [&](Tok t) {
            ++pos_;
            return Token{t, src_.substr(start, 1), start};
        };
        switch (c) {
        case '(': return single(Tok::lparen);
        case ')': return single(Tok::rparen);
        case ',': return single(Tok::comma);
        case ';': return single(Tok::semi);
        case ':': return single(Tok::colon);
        case '=': return single(Tok::equals);
        case '/': return single(Tok::slash);
        case '*': return single(Tok::star);
        default: break;
        }
        if (ident_start(c)) {
            while (pos_ < src_.size() && ident_char(src_[pos_])) ++pos_;
            // A trailing '-' belongs to what follows (e.g. "pi-" is never valid anyway).
            while (pos_ > start + 1 && src_[pos_ - 1] == '-') --pos_;
            return {Tok::ident, src_.substr(start, pos_ - start), start};
        }
        if (digit(c) || c == '.' || ((c == '-' || c == '+') && pos_ + 1 < src_.size() &&
                                     (digit(src_[pos_ + 1]) || src_[pos_ + 1] == '.'))) {
            if (c == '-' || c == '+') ++pos_;
            while (pos_ < src_.size() && digit(src_[pos_])) ++pos_;
            if (pos_ < src_.size() && src_[pos_] == '.') {
                ++pos_;
                while (pos_ < src_.size() && digit(src_[pos_])) ++pos_;
            }
            if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
                std::size_t q = pos_ + 1;
                if (q < src_.size() && (src_[q] == '-' || src_[q] == '+')) ++q;
                if (q < src_.size() && digit(src_[q])) {
                    pos_ = q;
                    while (pos_ < src_.size() && digit(src_[pos_])) ++pos_;
                }
            }
            return {Tok::number, src_.substr(start, pos_ - start), start};
        }
        if (c == '-') return single(Tok::minus);
        ++pos_;
        return {Tok::bad, src_.substr(start, 1), start};
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Parser

constexpr int kMaxDepth = 200;

class Parser {
public:
    explicit Parser(std::string_view src) : lexer_(src) { advance(); }

    OpExpr parse_all() {
        OpExpr e = expr(0);
        if (cur_.kind != Tok::end) fail("unexpected trailing input", {"end of input"});
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& what, std::vector<std::string> expected) {
        std::string msg = what + " at offset " + std::to_string(cur_.offset);
        if (cur_.kind == Tok::end) {
            msg += " (end of input)";
        } else {
            msg += " near '" + std::string(cur_.text) + "'";
        }
        if (!expected.empty()) {
            msg += "; expected ";
            for (std::size_t i = 0; i < expected.size(); ++i) {
                if (i) msg += i + 1 == expected.size() ? " or " : ", ";
                msg += expected[i];
            }
        }
        throw ParseError(msg, cur_.offset, std::move(expected));
    }

    void advance() { cur_ = lexer_.next(); }

    void expect(Tok kind, const char* label) {
        if (cur_.kind != kind) fail("syntax error", {label});
        advance();
    }

    bool accept(Tok kind) {
        if (cur_.kind != kind) return false;
        advance();
        return true;
    }

    bool at_ident(std::string_view word) const { return cur_.kind == Tok::ident && cur_.text == word; }

    void expect_ident(std::string_view word) {
        if (!at_ident(word)) fail("syntax error", {"'" + std::string(word) + "'"});
        advance();
    }

    double number() {
        if (cur_.kind != Tok::number) fail("syntax error", {"number"});
        const auto text = cur_.text;
        const char* first = text.data();
        if (*first == '+') ++first;
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(first, text.data() + text.size(), v);
        if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
            fail("malformed number", {"number"});
        }
        advance();
        return v;
    }

    std::int64_t integer() {
        if (cur_.kind != Tok::number) fail("syntax error", {"integer"});
        const auto text = cur_.text;
        std::int64_t v = 0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc() || ptr != text.data() + text.size() || v < 0 || v > (1LL << 31)) {
            fail("expected a nonnegative integer", {"integer"});
        }
        advance();
        return v;
    }

    Angle angle() {
        bool negative = false;
        if (accept(Tok::minus)) negative = true;
        std::int64_t coeff = 1;
        bool have_coeff = false;
        if (cur_.kind == Tok::number) {
            if (cur_.text.front() == '-') {
                negative = !negative;
                cur_.text.remove_prefix(1);
            }
            coeff = integer();
            have_coeff = true;
            if (!at_ident("pi") && cur_.kind != Tok::star) {
                if (coeff != 0) fail("angle must be a rational multiple of pi", {"'pi'"});
                return Angle{};
            }
            accept(Tok::star);
        }
        if (!at_ident("pi")) fail("syntax error", have_coeff ? std::vector<std::string>{"'pi'"}
                                                            : std::vector<std::string>{"angle"});
        advance();
        std::int64_t den = 1;
        if (accept(Tok::slash)) {
            den = integer();
            if (den == 0) fail("zero denominator in angle", {"positive integer"});
        }
        return Angle::make(negative ? -coeff : coeff, den);
    }

    std::vector<OpExpr> expr_list(int depth) {
        std::vector<OpExpr> out;
        out.push_back(expr(depth));
        while (accept(Tok::comma)) out.push_back(expr(depth));
        return out;
    }

    OpExpr expr(int depth) {
        if (depth > kMaxDepth) fail("expression nested too deeply", {});
        static const std::vector<std::string> kStarts{"'id'",     "'rot'",    "'refl'",   "'Mp'",
                                                      "'L'",      "'series'", "'compose'", "'unchecked'"};
        if (cur_.kind != Tok::ident) fail("syntax error", kStarts);
        const std::string_view word = cur_.text;
        OpExpr e;
        if (word == "id") {
            advance();
            e.kind = OpExpr::Kind::identity;
        } else if (word == "rot" || word == "refl") {
            advance();
            e.kind = word == "rot" ? OpExpr::Kind::rot : OpExpr::Kind::refl;
            expect(Tok::lparen, "'('");
            e.angle = angle();
            expect(Tok::rparen, "')'");
        } else if (word == "Mp") {
            advance();
            e.kind = OpExpr::Kind::power_mean;
            expect(Tok::lparen, "'('");
            e.p = number();
            expect(Tok::semi, "';'");
            e.children = expr_list(depth + 1);
            expect(Tok::rparen, "')'");
        } else if (word == "L") {
            advance();
            e.kind = OpExpr::Kind::lipschitz;
            expect(Tok::lparen, "'('");
            lipschitz_map(e);
            expect(Tok::semi, "';'");
            e.children = expr_list(depth + 1);
            expect(Tok::rparen, "')'");
        } else if (word == "series") {
            advance();
            e.kind = OpExpr::Kind::series;
            expect(Tok::lparen, "'('");
            expect_ident("geom");
            expect(Tok::lparen, "'('");
            e.c = number();
            expect(Tok::comma, "','");
            e.r = number();
            expect(Tok::rparen, "')'");
            expect(Tok::comma, "','");
            if (at_ident("rot-family")) {
                advance();
                e.family = OpExpr::FamilyKind::rotation;
                expect(Tok::lparen, "'('");
                e.angle = angle();
                expect(Tok::rparen, "')'");
            } else if (at_ident("const-family")) {
                advance();
                e.family = OpExpr::FamilyKind::constant;
                expect(Tok::lparen, "'('");
                e.children.push_back(expr(depth + 1));
                expect(Tok::rparen, "')'");
            } else {
                fail("syntax error", {"'rot-family'", "'const-family'"});
            }
            if (accept(Tok::semi)) {
                expect_ident("eps");
                expect(Tok::equals, "'='");
                e.eps = number();
            }
            expect(Tok::rparen, "')'");
        } else if (word == "compose") {
            advance();
            e.kind = OpExpr::Kind::compose;
            expect(Tok::lparen, "'('");
            e.children.push_back(expr(depth + 1));
            expect(Tok::comma, "','");
            e.children.push_back(expr(depth + 1));
            expect(Tok::rparen, "')'");
        } else if (word == "unchecked") {
            advance();
            e.kind = OpExpr::Kind::unchecked;
            e.children.push_back(expr(depth + 1));
        } else {
            fail("unknown operator '" + std::string(word) + "'", kStarts);
        }
        return e;
    }

    void lipschitz_map(OpExpr& e) {
        if (at_ident("max")) {
            advance();
            e.map = OpExpr::MapKind::max;
        } else if (at_ident("min")) {
            advance();
            e.map = OpExpr::MapKind::min;
        } else if (at_ident("proj")) {
            advance();
            e.map = OpExpr::MapKind::proj;
            expect(Tok::colon, "':'");
            e.coordinate = static_cast<std::size_t>(integer());
        } else if (at_ident("convex")) {
            advance();
            e.map = OpExpr::MapKind::convex;
            expect(Tok::colon, "':'");
            e.weights.push_back(number());
            while (accept(Tok::comma)) e.weights.push_back(number());
        } else {
            fail("syntax error", {"'max'", "'min'", "'proj'", "'convex'"});
        }
    }

    Lexer lexer_;
    Token cur_{Tok::end, {}, 0};
};

void check_angles(const OpExpr& e, std::size_t n) {
    const bool uses_angle = e.kind == OpExpr::Kind::rot || e.kind == OpExpr::Kind::refl ||
                            (e.kind == OpExpr::Kind::series && e.family == OpExpr::FamilyKind::rotation);
    if (uses_angle) e.angle.shift_on(n);
    for (const auto& c : e.children) check_angles(c, n);
}

std::string number_text(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string angle_text(const Angle& a) {
    if (a.num == 0) return "0";
    std::string s = a.num < 0 ? "-" : "";
    const std::int64_t mag = a.num < 0 ? -a.num : a.num;
    if (mag != 1) s += std::to_string(mag);
    s += "pi";
    if (a.den != 1) s += "/" + std::to_string(a.den);
    return s;
}

std::string join(const std::vector<OpExpr>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) s += ", ";
        s += print(xs[i]);
    }
    return s;
}

}  // namespace

OpExpr parse(std::string_view text) { return Parser(text).parse_all(); }

OpExpr parse(std::string_view text, GridCircle grid) {
    OpExpr e = parse(text);
    check_angles(e, grid.size());
    return e;
}

std::string print(const OpExpr& e) {
    switch (e.kind) {
    case OpExpr::Kind::identity:
        return "id";
    case OpExpr::Kind::rot:
        return "rot(" + angle_text(e.angle) + ")";
    case OpExpr::Kind::refl:
        return "refl(" + angle_text(e.angle) + ")";
    case OpExpr::Kind::power_mean:
        return "Mp(" + number_text(e.p) + "; " + join(e.children) + ")";
    case OpExpr::Kind::lipschitz: {
        std::string m;
        switch (e.map) {
        case OpExpr::MapKind::max: m = "max"; break;
        case OpExpr::MapKind::min: m = "min"; break;
        case OpExpr::MapKind::proj: m = "proj:" + std::to_string(e.coordinate); break;
        case OpExpr::MapKind::convex:
            m = "convex:";
            for (std::size_t i = 0; i < e.weights.size(); ++i) {
                if (i) m += ",";
                m += number_text(e.weights[i]);
            }
            break;
        }
        return "L(" + m + "; " + join(e.children) + ")";
    }
    case OpExpr::Kind::series: {
        std::string s = "series(geom(" + number_text(e.c) + "," + number_text(e.r) + "), ";
        if (e.family == OpExpr::FamilyKind::rotation) {
            s += "rot-family(" + angle_text(e.angle) + ")";
        } else {
            s += "const-family(" + print(e.children.at(0)) + ")";
        }
        if (e.eps) s += "; eps=" + number_text(*e.eps);
        return s + ")";
    }
    case OpExpr::Kind::compose:
        return "compose(" + print(e.children.at(0)) + ", " + print(e.children.at(1)) + ")";
    case OpExpr::Kind::unchecked:
        return "unchecked " + print(e.children.at(0));
    }
    return "id";
}

// ---------------------------------------------------------------------------
// Elaboration

namespace {

Operator elaborate_impl(const OpExpr& e, const Group& group, const FunctionSpace& space, bool unchecked) {
    const std::size_t n = group.grid().size();
    auto elaborate_all = [&](const std::vector<OpExpr>& xs) {
        std::vector<Operator> ops;
        ops.reserve(xs.size());
        for (const auto& x : xs) ops.push_back(elaborate_impl(x, group, space, unchecked));
        return ops;
    };

    try {
        switch (e.kind) {
        case OpExpr::Kind::identity:
            return Operator::identity();
        case OpExpr::Kind::rot:
        case OpExpr::Kind::refl: {
            const std::int64_t s = e.angle.shift_on(n);
            const GroupElement g = e.kind == OpExpr::Kind::rot ? GroupElement::rotation(n, s)
                                                               : GroupElement::reflection(n, s);
            return unchecked ? precompose_unchecked(g) : precompose(g, group);
        }
        case OpExpr::Kind::power_mean:
            return unchecked ? power_mean_unchecked(e.p, elaborate_all(e.children))
                             : power_mean(e.p, elaborate_all(e.children));
        case OpExpr::Kind::lipschitz: {
            const std::size_t arity = e.children.size();
            LipschitzMap map = [&] {
                switch (e.map) {
                case OpExpr::MapKind::max: return LipschitzMap::max(arity);
                case OpExpr::MapKind::min: return LipschitzMap::min(arity);
                case OpExpr::MapKind::proj:
                    if (e.coordinate == 0) throw Error("projection coordinates are 1-based");
                    return LipschitzMap::projection(arity, e.coordinate - 1);
                case OpExpr::MapKind::convex: return LipschitzMap::convex(e.weights);
                }
                throw Error("unknown lipschitz map");
            }();
            return lipschitz_combine(std::move(map), elaborate_all(e.children));
        }
        case OpExpr::Kind::series: {
            auto coeffs = CoefficientSequence::geometric(e.c, e.r);
            std::optional<OperatorSequence> family;
            if (e.family == OpExpr::FamilyKind::rotation) {
                const auto step = GroupElement::rotation(n, e.angle.shift_on(n));
                family = unchecked ? OperatorSequence::rotations_unchecked(step, space.bound)
                                   : OperatorSequence::rotations(step, group, space.bound);
            } else {
                family = OperatorSequence::constant(
                    elaborate_impl(e.children.at(0), group, space, unchecked), space.bound);
            }
            TruncationPolicy policy;
            if (e.eps) policy.epsilon = *e.eps;
            return series(std::move(coeffs), std::move(*family), policy);
        }
        case OpExpr::Kind::compose:
            return compose(elaborate_impl(e.children.at(0), group, space, unchecked),
                           elaborate_impl(e.children.at(1), group, space, unchecked));
        case OpExpr::Kind::unchecked:
            return elaborate_impl(e.children.at(0), group, space, true);
        }
    } catch (const ElaborationError&) {
        throw;
    } catch (const Error& err) {
        throw ElaborationError(std::string(err.what()) + " in '" + print(e) + "'");
    }
    throw ElaborationError("unknown expression kind");
}

}  // namespace

Operator elaborate(const OpExpr& expr, const Group& group, const FunctionSpace& space) {
    return elaborate_impl(expr, group, space, false);
}

Operator parse_operator(std::string_view text, const Group& group, const FunctionSpace& space) {
    return elaborate(parse(text, group.grid()), group, space);
}

namespace {

// `unchecked` covers its whole subtree, so it is emitted only at the topmost
// unchecked node of each branch.
OpExpr to_expr_impl(const Operator& op, bool inside_unchecked) {
    const bool unchecked_family = op.kind() == Operator::Kind::series &&
                                  op.family().kind() == OperatorSequence::Kind::rotation &&
                                  !op.family().validated();
    const bool here = op.unchecked_node() || unchecked_family;
    const bool inner = inside_unchecked || here;
    OpExpr e;
    switch (op.kind()) {
    case Operator::Kind::identity:
        e.kind = OpExpr::Kind::identity;
        break;
    case Operator::Kind::precompose: {
        const auto& g = op.element();
        e.kind = g.reflects() ? OpExpr::Kind::refl : OpExpr::Kind::rot;
        e.angle = Angle::from_shift(static_cast<std::int64_t>(g.shift()), g.grid_size());
        break;
    }
    case Operator::Kind::lipschitz_combine: {
        const auto& m = op.lipschitz_map();
        e.kind = OpExpr::Kind::lipschitz;
        switch (m.kind()) {
        case LipschitzMap::Kind::max: e.map = OpExpr::MapKind::max; break;
        case LipschitzMap::Kind::min: e.map = OpExpr::MapKind::min; break;
        case LipschitzMap::Kind::projection:
            e.map = OpExpr::MapKind::proj;
            e.coordinate = m.coordinate() + 1;
            break;
        case LipschitzMap::Kind::convex:
            e.map = OpExpr::MapKind::convex;
            e.weights.assign(m.weights().begin(), m.weights().end());
            break;
        }
        for (const auto& c : op.children()) e.children.push_back(to_expr_impl(c, inner));
        break;
    }
    case Operator::Kind::power_mean:
        e.kind = OpExpr::Kind::power_mean;
        e.p = op.exponent();
        for (const auto& c : op.children()) e.children.push_back(to_expr_impl(c, inner));
        break;
    case Operator::Kind::series: {
        const auto& coeffs = op.coefficients();
        if (!coeffs.is_geometric()) throw Error("only geometric series have a text form");
        e.kind = OpExpr::Kind::series;
        e.c = coeffs.scale();
        e.r = coeffs.ratio();
        const auto& fam = op.family();
        if (fam.kind() == OperatorSequence::Kind::rotation) {
            e.family = OpExpr::FamilyKind::rotation;
            e.angle = Angle::from_shift(static_cast<std::int64_t>(fam.step().shift()),
                                        fam.step().grid_size());
        } else {
            e.family = OpExpr::FamilyKind::constant;
            e.children.push_back(to_expr_impl(fam.base(), inner));
        }
        e.eps = op.epsilon();
        break;
    }
    case Operator::Kind::compose:
        e.kind = OpExpr::Kind::compose;
        e.children.push_back(to_expr_impl(op.children()[0], inner));
        e.children.push_back(to_expr_impl(op.children()[1], inner));
        break;
    }
    if (here && !inside_unchecked) {
        OpExpr wrapped;
        wrapped.kind = OpExpr::Kind::unchecked;
        wrapped.children.push_back(std::move(e));
        return wrapped;
    }
    return e;
}

}  // namespace

OpExpr to_expr(const Operator& op) { return to_expr_impl(op, false); }

std::string describe(const Operator& op) { return print(to_expr(op)); }

}  // namespace geneo
