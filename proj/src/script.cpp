#include "vertex/script.hpp"

#include "vertex/sampling.hpp"
#include "vertex/serialize.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <ostream>
#include <set>
#include <sstream>

namespace vertex {

ScriptError::ScriptError(const std::string& msg, int l, int c)
    : VertexError("line " + std::to_string(l) + ", column " + std::to_string(c) + ": " + msg),
      line(l),
      column(c),
      message(msg) {}

bool Value::operator==(const Value& o) const {
    if (is_form != o.is_form) return false;
    return is_form ? form == o.form : poly == o.poly;
}

std::string to_string(const Value& v) {
    if (!v.is_form) return to_string(v.poly);
    auto indices = [](const std::vector<int>& idx) {
        std::string d = "dx(";
        for (size_t i = 0; i < idx.size(); ++i) d += (i ? "," : "") + std::to_string(idx[i] + 1);
        return d + ")";
    };
    // a zero form keeps its degree through a repeated index
    if (v.form.is_zero()) return "0*" + indices(std::vector<int>(v.form.degree(), 0));
    std::string out;
    for (const auto& [idx, c] : v.form.components()) {
        if (!out.empty()) out += " + ";
        out += "(" + to_string(c) + ")*" + indices(idx);
    }
    return out;
}

namespace {

const std::set<std::string> function_names{"bracket", "nprod", "lie", "euler", "inv", "d", "dx"};
const std::set<std::string> reserved{"T", "lam", "pva"};
const std::set<std::string> declaration_keywords{"gen", "base", "param"};
const std::set<std::string> command_keywords{
    "preset", "validate", "axioms", "htwist", "shear", "wzw-verify", "sugawara-verify", "euler-lagrange",
    "noether", "legendre", "n2-verify", "schouten-check", "mc-check", "qcoh", "dump"};

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

struct Token {
    enum Kind { Number, Ident, Punct, End } kind;
    std::string text;
    int offset;
};

std::vector<Token> lex(std::string_view s, int line, int column) {
    std::vector<Token> out;
    size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        size_t start = i;
        if (std::isdigit(static_cast<unsigned char>(c))) {
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
            out.push_back({Token::Number, std::string(s.substr(start, i - start)), static_cast<int>(start)});
        } else if (is_ident_start(c)) {
            while (i < s.size() && is_ident_char(s[i])) ++i;
            out.push_back({Token::Ident, std::string(s.substr(start, i - start)), static_cast<int>(start)});
        } else if ((c == '=' || c == '!') && i + 1 < s.size() && s[i + 1] == '=') {
            out.push_back({Token::Punct, std::string(s.substr(i, 2)), static_cast<int>(i)});
            i += 2;
        } else if (std::string_view("+-*/^'(),={}").find(c) != std::string_view::npos) {
            out.push_back({Token::Punct, std::string(1, c), static_cast<int>(i)});
            ++i;
        } else {
            throw ScriptError(std::string("unexpected character '") + c + "'", line, column + static_cast<int>(i));
        }
    }
    out.push_back({Token::End, "", static_cast<int>(s.size())});
    return out;
}

bool is_constant(const Element& e) {
    return e.is_zero() || (e.size() == 1 && e == Element::constant(e.signature(), e.constant_term()));
}

LambdaPolynomial multiply(const LambdaPolynomial& a, const LambdaPolynomial& b, const SigPtr& sig) {
    LambdaPolynomial r(sig);
    for (int i = 0; i <= a.degree(); ++i)
        for (int j = 0; j <= b.degree(); ++j) {
            Element c = a.coeff(i) * b.coeff(j);
            if (!c.is_zero()) r.add(i + j, c);
        }
    return r;
}

TargetForm scale(const TargetForm& f, const Element& e, bool left) {
    TargetForm r(f.signature(), f.degree());
    for (const auto& [idx, c] : f.components()) r.add(idx, left ? e * c : c * e);
    return r;
}

TargetForm wedge(const TargetForm& a, const TargetForm& b) {
    TargetForm r(a.signature(), a.degree() + b.degree());
    for (const auto& [i, f] : a.components())
        for (const auto& [j, g] : b.components()) {
            std::vector<int> idx = i;
            idx.insert(idx.end(), j.begin(), j.end());
            r.add(idx, f * g);
        }
    return r;
}

std::string rational_text(const Rational& q) { return to_string(q); }

std::string join_rationals(const std::vector<Rational>& v) {
    std::string s = "[";
    for (size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + to_string(v[i]);
    return s + "]";
}

std::vector<Rational> parse_rational_list(const std::string& text) {
    std::vector<Rational> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_rational(trim(item)));
    return out;
}

const char* verdict(bool ok) { return ok ? "PASS" : "FAIL"; }

}  // namespace

// ---------------------------------------------------------------- expression parser

struct Interpreter::Parser {
    Interpreter& in;
    std::vector<Token> toks;
    size_t i = 0;
    int line, column;

    Parser(Interpreter& interp, std::string_view text, int l, int c)
        : in(interp), toks(lex(text, l, c)), line(l), column(c) {}

    const Token& peek() const { return toks[i]; }
    bool at(std::string_view p) const { return toks[i].kind == Token::Punct && toks[i].text == p; }
    [[noreturn]] void fail(const std::string& msg, const Token& t) const {
        throw ScriptError(msg, line, column + t.offset);
    }
    [[noreturn]] void fail(const std::string& msg) const { fail(msg, peek()); }
    void expect(std::string_view p) {
        if (!at(p)) fail("expected '" + std::string(p) + "'" + (peek().kind == Token::End ? " at end of input" : ""));
        ++i;
    }

    const SigPtr& sig() { return in.signature(); }

    Value parse_all() {
        Value v = expr();
        if (peek().kind != Token::End) fail("unexpected '" + peek().text + "'");
        return v;
    }

    Value expr() {
        Value v = term();
        while (at("+") || at("-")) {
            const Token& op = toks[i++];
            Value w = term();
            v = add(v, w, op.text == "-", op);
        }
        return v;
    }

    Value term() {
        Value v = unary();
        while (at("*") || at("/")) {
            const Token& op = toks[i++];
            Value w = unary();
            if (op.text == "*") v = mul(v, w, op);
            else v = div(v, w, op);
        }
        return v;
    }

    Value unary() {
        if (at("-")) {
            ++i;
            Value v = unary();
            return neg(v);
        }
        // T(...) is a call and binds like one; bare T is a prefix operator
        if (peek().kind == Token::Ident && peek().text == "T" && toks[i + 1].kind != Token::End &&
            !(toks[i + 1].kind == Token::Punct && std::string_view("(+*/^),=").find(toks[i + 1].text[0]) !=
                                                         std::string_view::npos)) {
            const Token& t = toks[i++];
            Value v = unary();
            return derivative(v, 1, t);
        }
        return power();
    }

    Value power() {
        Value v = postfix();
        if (at("^")) {
            const Token& op = toks[i++];
            bool negative = false;
            if (at("-")) {
                negative = true;
                ++i;
            }
            if (peek().kind != Token::Number) fail("expected an integer exponent");
            long e = std::stol(toks[i++].text);
            return raise(v, negative ? -e : e, op);
        }
        return v;
    }

    Value postfix() {
        Value v = primary();
        while (at("'")) {
            const Token& t = toks[i++];
            int order = 1;
            if (at("(")) {
                ++i;
                if (peek().kind != Token::Number) fail("expected a jet order");
                order = std::stoi(toks[i++].text);
                expect(")");
            }
            v = derivative(v, order, t);
        }
        return v;
    }

    std::vector<Value> args(const Token& fn, size_t count) {
        expect("(");
        std::vector<Value> out;
        if (!at(")")) {
            out.push_back(expr());
            while (at(",")) {
                ++i;
                out.push_back(expr());
            }
        }
        expect(")");
        if (out.size() != count)
            fail(fn.text + " takes " + std::to_string(count) + " argument" + (count == 1 ? "" : "s"), fn);
        return out;
    }

    Element element(const Value& v, const Token& t) const {
        if (!v.is_element()) fail(v.is_form ? "expected an element, got a form" : "expected an element, got a lam-polynomial", t);
        return v.poly.is_zero() ? Element(in.signature()) : v.poly.coeff(0);
    }

    int integer(const Value& v, const Token& t) const {
        Element e = element(v, t);
        if (!is_constant(e)) fail("expected an integer", t);
        Rational q = e.constant_term();
        if (q.get_den() != 1) fail("expected an integer", t);
        return static_cast<int>(q.get_num().get_si());
    }

    Value call(const Token& fn) {
        const std::string& f = fn.text;
        if (f == "bracket") {
            auto a = args(fn, 2);
            return Value::of(lambda_bracket(in.pva(), element(a[0], fn), element(a[1], fn)));
        }
        if (f == "nprod") {
            auto a = args(fn, 3);
            int n = integer(a[2], fn);
            if (n < -1) fail("nprod needs n >= -1", fn);
            return Value::of(nth_product(in.pva(), element(a[0], fn), element(a[1], fn), n));
        }
        if (f == "lie") {
            auto a = args(fn, 2);
            return Value::of(nth_product(in.pva(), element(a[0], fn), element(a[1], fn), 0));
        }
        if (f == "euler") {
            expect("(");
            Value a = expr();
            expect(",");
            if (peek().kind != Token::Ident) fail("euler needs a generator name");
            const Token& g = toks[i++];
            expect(")");
            int gen = sig()->find_generator(g.text);
            if (gen < 0) fail("unknown generator '" + g.text + "'", g);
            const Pva& P = in.pva();
            Derivation d = nullptr;
            if (P.twisted()) d = [&P](const Element& e) { return P.derivation(e); };
            return Value::of(variational_derivative(element(a, fn), gen, d));
        }
        if (f == "inv") {
            auto a = args(fn, 1);
            return raise(a[0], -1, fn);
        }
        if (f == "d") {
            auto a = args(fn, 1);
            Svdo S = in.svdo_context();
            if (a[0].is_form) return Value::of(de_rham(S, a[0].form));
            TargetForm zero(sig(), 0);
            zero.add({}, element(a[0], fn));
            return Value::of(de_rham(S, zero));
        }
        // dx(i, j, ...)
        expect("(");
        std::vector<int> idx;
        int dim = in.svdo_context().dim();
        while (!at(")")) {
            if (!idx.empty()) expect(",");
            if (peek().kind != Token::Number) fail("dx takes 1-based coordinate indices");
            const Token& t = toks[i++];
            int k = std::stoi(t.text);
            if (k < 1 || k > dim) fail("coordinate index out of range 1.." + std::to_string(dim), t);
            idx.push_back(k - 1);
        }
        expect(")");
        TargetForm form(sig(), static_cast<int>(idx.size()));
        form.add(idx, Element::constant(sig(), 1));
        return Value::of(form);
    }

    Value primary() {
        const Token& t = peek();
        if (t.kind == Token::Number) {
            ++i;
            return Value::of(Element::constant(sig(), Rational(mpz_class(t.text))));
        }
        if (at("(")) {
            ++i;
            Value v = expr();
            expect(")");
            return v;
        }
        if (t.kind != Token::Ident) fail(t.kind == Token::End ? "unexpected end of expression" : "unexpected '" + t.text + "'");
        ++i;
        if (at("(") && function_names.count(t.text)) return call(t);
        if (t.text == "T") {
            if (!at("(")) fail("T needs an argument", t);
            ++i;
            Value v = expr();
            expect(")");
            return derivative(v, 1, t);
        }
        if (auto it = in.bindings_.find(t.text); it != in.bindings_.end()) return it->second;
        const SigPtr& s = sig();
        if (t.text == "lam") {
            LambdaPolynomial l(s);
            l.add(1, Element::constant(s, 1));
            return Value::of(l);
        }
        if (int g = s->find_generator(t.text); g >= 0) return Value::of(Element::jet(s, g));
        if (int p = s->find_parameter(t.text); p >= 0) return Value::of(Element::parameter(s, p));
        if (int b = s->find_base(t.text); b >= 0) return Value::of(Element::base(s, b));
        if (int u = s->find_unit(t.text); u >= 0) return Value::of(Element::unit(s, u));
        if (function_names.count(t.text)) fail(t.text + " needs arguments", t);
        fail("unknown identifier '" + t.text + "'", t);
    }

    // ---- value arithmetic

    Value add(const Value& a, const Value& b, bool subtract, const Token& op) const {
        if (a.is_form != b.is_form) fail("cannot add a form and an element", op);
        if (a.is_form) {
            if (a.form.degree() != b.form.degree()) fail("cannot add forms of different degrees", op);
            return Value::of(subtract ? a.form + (-b.form) : a.form + b.form);
        }
        return Value::of(subtract ? a.poly - b.poly : a.poly + b.poly);
    }

    Value neg(const Value& a) const { return a.is_form ? Value::of(-a.form) : Value::of(-a.poly); }

    Value mul(const Value& a, const Value& b, const Token& op) {
        if (a.is_form && b.is_form) return Value::of(wedge(a.form, b.form));
        if (a.is_form) return Value::of(scale(a.form, element(b, op), false));
        if (b.is_form) return Value::of(scale(b.form, element(a, op), true));
        return Value::of(multiply(a.poly, b.poly, sig()));
    }

    Value div(const Value& a, const Value& b, const Token& op) {
        Element d = element(b, op);
        if (!is_constant(d) || d.is_zero()) fail("division only by a non-zero constant", op);
        Rational inv = 1 / d.constant_term();
        if (a.is_form) return Value::of(inv * a.form);
        LambdaPolynomial r = a.poly;
        r *= inv;
        return Value::of(r);
    }

    Value derivative(const Value& v, int order, const Token& t) const {
        if (v.is_form) fail("T does not act on forms", t);
        LambdaPolynomial r(in.signature());
        for (int n = 0; n <= v.poly.degree(); ++n) {
            Element c = total_derivative_power(v.poly.coeff(n), order);
            if (!c.is_zero()) r.add(n, c);
        }
        return Value::of(r);
    }

    Value raise(const Value& v, long e, const Token& op) {
        if (v.is_form) {
            if (e < 0) fail("forms have no inverse", op);
            TargetForm r(sig(), 0);
            r.add({}, Element::constant(sig(), 1));
            for (long k = 0; k < e; ++k) r = wedge(r, v.form);
            return Value::of(r);
        }
        if (e >= 2 && !v.poly.is_zero())
            for (const auto& c : v.poly.coefficients())
                for (const auto& [m, q] : c.terms())
                    if (monomial_odd(*sig(), m)) fail("odd element raised to the power " + std::to_string(e), op);
        if (e >= 0) {
            LambdaPolynomial r = LambdaPolynomial::constant(Element::constant(sig(), 1));
            for (long k = 0; k < e; ++k) r = multiply(r, v.poly, sig());
            return Value::of(r);
        }
        // negative powers of a monomial in invertible order-0 jets
        Element a = element(v, op);
        if (a.size() != 1) fail("only monomials in invertible generators can be inverted", op);
        const auto& [m, c] = *a.terms().begin();
        for (int x : m.extra)
            if (x != 0) fail("only monomials in invertible generators can be inverted", op);
        Element r = Element::constant(sig(), 1 / c);
        for (const auto& f : m.jets) {
            if (f.order != 0 || !sig()->generators()[f.gen].invertible)
                fail("'" + sig()->generators()[f.gen].name + "' is not invertible", op);
            r = r * pow(Element::inverse(sig(), f.gen), f.exp);
        }
        return Value::of(pow(r, static_cast<int>(-e)));
    }
};

// ---------------------------------------------------------------- commands

struct Interpreter::Command {
    std::string name;
    std::string positional;
    int line = 1, column = 1;       // statement start
    int positional_column = 1;
    std::map<std::string, std::string> flags;

    bool has(const std::string& f) const { return flags.count(f) > 0; }
    std::string get(const std::string& f, const std::string& fallback = "") const {
        auto it = flags.find(f);
        return it == flags.end() ? fallback : it->second;
    }
    int get_int(const std::string& f, int fallback) const {
        auto it = flags.find(f);
        if (it == flags.end()) return fallback;
        try {
            size_t used = 0;
            int v = std::stoi(it->second, &used);
            if (used == it->second.size()) return v;
        } catch (const std::exception&) {
        }
        throw ScriptError("--" + f + " expects an integer, got '" + it->second + "'", line, column);
    }
    Rational get_rational(const std::string& f, const Rational& fallback) const {
        auto it = flags.find(f);
        if (it == flags.end()) return fallback;
        try {
            return parse_rational(it->second);
        } catch (const std::exception&) {
            throw ScriptError("--" + f + " expects a rational, got '" + it->second + "'", line, column);
        }
    }
    [[noreturn]] void usage(const std::string& msg) const { throw ScriptError(name + ": " + msg, line, column); }
    void allow(std::initializer_list<const char*> names) const {
        for (const auto& [f, v] : flags)
            if (std::find_if(names.begin(), names.end(), [&](const char* n) { return f == n; }) == names.end())
                usage("unknown flag --" + f);
    }
    void no_positional() const {
        if (!positional.empty()) usage("unexpected argument '" + positional + "'");
    }
};

namespace {

const std::set<std::string> boolean_flags{"apply", "expect-automorphism", "a-model", "json"};

}  // namespace

Interpreter::Interpreter(std::ostream& out) : out_(out) {}
Interpreter::~Interpreter() = default;

void Interpreter::freeze() {
    if (sig_) return;
    sig_ = AlgebraSignature::make(gens_, base_, params_);
    table_ = BracketTable(sig_);
}

const SigPtr& Interpreter::signature() {
    freeze();
    return sig_;
}

const Pva& Interpreter::pva() {
    freeze();
    if (!pva_) {
        Pva P(table_);
        pva_ = twist_.empty() ? P : P.with_twist(twist_);
    }
    return *pva_;
}

Svdo Interpreter::svdo_context() {
    if (svdo_) {
        Svdo S = *svdo_;
        S.pva = pva();
        return S;
    }
    const SigPtr& s = signature();
    Svdo S;
    S.pva = pva();
    for (int g = 0; g < s->num_generators(); ++g) {
        const auto& spec = s->generators()[g];
        if (spec.odd) continue;
        if (spec.weight == 0) S.x.push_back(g);
        if (spec.weight == 1) S.p.push_back(g);
    }
    if (S.x.size() != S.p.size())
        throw VertexError("no coordinate/momentum split: need as many even weight-1 as even weight-0 generators");
    return S;
}

Value Interpreter::evaluate(std::string_view expr) {
    Parser p(*this, expr, 1, 1);
    return p.parse_all();
}

Element Interpreter::parse_element(std::string_view expr) {
    Parser p(*this, expr, 1, 1);
    Value v = p.parse_all();
    if (!v.is_element()) throw ScriptError("expected an element", 1, 1);
    return v.poly.is_zero() ? Element(signature()) : v.poly.coeff(0);
}

void Interpreter::load_preset(const std::string& name) {
    std::vector<std::string> parts;
    {
        std::stringstream ss(name);
        std::string item;
        while (std::getline(ss, item, ':')) parts.push_back(item);
    }
    auto count = [&](size_t pos, int fallback) {
        if (parts.size() <= pos) return fallback;
        try {
            size_t used = 0;
            int v = std::stoi(parts[pos], &used);
            if (used == parts[pos].size() && v >= 1) return v;
        } catch (const std::exception&) {
        }
        throw VertexError("bad size in preset '" + name + "'");
    };
    if (parts.empty()) throw VertexError("empty preset name");

    gens_.clear();
    base_.clear();
    params_.clear();
    bindings_.clear();
    twist_.clear();
    pva_.reset();
    svdo_.reset();
    wzw_.reset();
    n2_.reset();
    sigma_n_ = 0;

    const std::string& kind = parts[0];
    Pva P;
    if (kind == "canonical" && parts.size() <= 2) {
        svdo_ = canonical_svdo(count(1, 1));
        P = svdo_->pva;
    } else if (kind == "wzw" && parts.size() == 3 && (parts[1] == "gl1" || parts[1] == "gl2")) {
        Rational k;
        try {
            k = parse_rational(parts[2]);
        } catch (const std::exception&) {
            throw VertexError("bad level in preset '" + name + "'");
        }
        wzw_ = std::make_unique<WzwModel>(wzw_model(parts[1] == "gl1" ? 1 : 2, k));
        svdo_ = wzw_->svdo;
        P = wzw_->pva();
        WzwCurrents cur = wzw_currents(*wzw_);
        for (int i = 0; i < wzw_->n; ++i)
            for (int j = 0; j < wzw_->n; ++j) {
                std::string ij = std::to_string(i + 1) + std::to_string(j + 1);
                bindings_["jl" + ij] = Value::of(cur.left[i][j]);
                bindings_["jr" + ij] = Value::of(cur.right[i][j]);
            }
        if (k != 0) bindings_["sug"] = Value::of(sugawara(*wzw_));
    } else if (kind == "sigma-flat" && parts.size() <= 2) {
        sigma_n_ = count(1, 1);
        SigmaModel M = sigma_flat(sigma_n_);
        Legendre leg(M.space, M.lagrangian);
        svdo_ = leg.target();
        P = svdo_->pva;
        SigmaVirasoro V = sigma_virasoro(sigma_n_);
        const SigPtr& s = P.signature();
        bindings_["Lplus"] = Value::of(V.plus.rebase(s));
        bindings_["Lminus"] = Value::of(V.minus.rebase(s));
        bindings_["Lzero"] = Value::of(V.zero.rebase(s));
    } else if (kind == "n2-flat" && parts.size() <= 2) {
        n2_ = std::make_unique<N2Model>(n2_flat(count(1, 1)));
        P = n2_->pva;
        N2Generators Q = n2_generators(*n2_);
        bindings_["Qmm"] = Value::of(Q.mm);
        bindings_["Qmp"] = Value::of(Q.mp);
        bindings_["Qpp"] = Value::of(Q.pp);
        bindings_["Qpm"] = Value::of(Q.pm);
    } else {
        throw VertexError("unknown preset '" + name +
                          "' (canonical:N, wzw:gl1:K, wzw:gl2:K, sigma-flat:N, n2-flat:N)");
    }
    sig_ = P.signature();
    table_ = P.table();
    twist_ = P.twist_rates();
    pva_ = P;
    preset_ = name;
}

bool Interpreter::check_fixture(const std::string& file, const std::string& key, const Json& computed) {
    if (!fixtures_) return true;
    auto stored = fixtures_->find(file, key);
    if (!stored) {
        out_ << "  no fixture entry " << file << " [" << key << "]\n";
        return true;
    }
    if (*stored == computed) {
        out_ << "  fixture " << file << " [" << key << "] matches\n";
        return true;
    }
    out_ << "  fixture " << file << " [" << key << "] differs\n    stored:   " << stored->dump()
         << "\n    computed: " << computed.dump() << "\n";
    return false;
}

const N2Model& Interpreter::n2_context(const Command& c) {
    if (c.has("n")) {
        int n = c.get_int("n", 1);
        if (n < 1) c.usage("--n must be >= 1");
        load_preset("n2-flat:" + std::to_string(n));
    }
    if (!n2_) c.usage("needs the n2-flat preset (or --n N)");
    return *n2_;
}

// ---------------------------------------------------------------- statements

int Interpreter::run(std::string_view text) {
    bool failed = false;
    size_t i = 0;
    int line = 1, col = 1;
    while (i <= text.size()) {
        size_t start = i;
        int sline = line, scol = col;
        std::string stmt;
        while (i < text.size() && text[i] != '\n' && text[i] != ';') {
            if (text[i] == '#') {
                while (i < text.size() && text[i] != '\n') ++i, ++col;
                break;
            }
            stmt += text[i];
            ++i;
            ++col;
        }
        (void)start;
        try {
            if (!run_statement(stmt, sline, scol)) failed = true;
        } catch (const ScriptError& e) {
            out_ << "error: " << e.what() << "\n";
            return exit_usage;
        } catch (const VertexError& e) {
            out_ << "error: line " << sline << ": " << e.what() << "\n";
            return exit_usage;
        }
        if (i >= text.size()) break;
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        ++i;
    }
    return failed ? exit_failed : exit_ok;
}

bool Interpreter::run_statement(std::string_view text, int line, int column) {
    size_t lead = 0;
    while (lead < text.size() && std::isspace(static_cast<unsigned char>(text[lead]))) ++lead;
    text.remove_prefix(lead);
    column += static_cast<int>(lead);
    text = std::string_view(text.data(), trim(text).size());
    if (text.empty()) return true;

    size_t w = 0;
    while (w < text.size() && (is_ident_char(text[w]) || text[w] == '-')) ++w;
    std::string keyword(text.substr(0, w));
    bool separated = w == text.size() || std::isspace(static_cast<unsigned char>(text[w]));
    std::string_view rest = text.substr(w);
    int rest_column = column + static_cast<int>(w);

    if (declaration_keywords.count(keyword) && separated) {
        declare(keyword, rest, line, rest_column);
        return true;
    }
    if (keyword == "let" && separated) {
        auto toks = lex(rest, line, rest_column);
        if (toks[0].kind != Token::Ident || !(toks[1].kind == Token::Punct && toks[1].text == "="))
            throw ScriptError("expected 'let NAME = expression'", line, rest_column);
        const std::string& name = toks[0].text;
        const SigPtr& s = signature();
        if (reserved.count(name) || function_names.count(name) || s->find_generator(name) >= 0 ||
            s->find_parameter(name) >= 0 || s->find_base(name) >= 0 || s->find_unit(name) >= 0)
            throw ScriptError("'" + name + "' is already a name of the algebra", line, rest_column + toks[0].offset);
        int off = toks[1].offset + 1;
        Parser p(*this, rest.substr(off), line, rest_column + off);
        bindings_[name] = p.parse_all();
        return true;
    }
    if (keyword == "set" && (separated || (w < text.size() && text[w] == '{'))) {
        auto toks = lex(rest, line, rest_column);
        auto punct = [&](size_t k, const char* p) { return toks[k].kind == Token::Punct && toks[k].text == p; };
        if (toks.size() < 7 || !punct(0, "{") || toks[1].kind != Token::Ident || !punct(2, ",") ||
            toks[3].kind != Token::Ident || !punct(4, "}") || !punct(5, "="))
            throw ScriptError("expected 'set {u, v} = expression'", line, rest_column);
        const SigPtr& s = signature();
        for (size_t k : {1u, 3u})
            if (s->find_generator(toks[k].text) < 0)
                throw ScriptError("unknown generator '" + toks[k].text + "'", line, rest_column + toks[k].offset);
        int off = toks[5].offset + 1;
        Parser p(*this, rest.substr(off), line, rest_column + off);
        Value v = p.parse_all();
        if (v.is_form) throw ScriptError("a bracket value cannot be a form", line, rest_column + off);
        table_.set(toks[1].text, toks[3].text, v.poly);
        pva_.reset();
        return true;
    }
    if (keyword == "print" && separated) {
        Parser p(*this, rest, line, rest_column);
        out_ << to_string(p.parse_all()) << "\n";
        return true;
    }
    if ((keyword == "expect" || keyword == "expect-class") && separated) {
        auto toks = lex(rest, line, rest_column);
        int depth = 0;
        size_t split = 0;
        for (size_t k = 0; k < toks.size(); ++k) {
            if (toks[k].kind != Token::Punct) continue;
            if (toks[k].text == "(") ++depth;
            if (toks[k].text == ")") --depth;
            if (depth == 0 && (toks[k].text == "==" || toks[k].text == "!=")) {
                split = k;
                break;
            }
        }
        if (!split) throw ScriptError("expected 'A == B' or 'A != B'", line, rest_column);
        bool equal = toks[split].text == "==";
        int off = toks[split].offset;
        std::string_view lhs_text = rest.substr(0, off), rhs_text = rest.substr(off + 2);
        Value lhs = Parser(*this, lhs_text, line, rest_column).parse_all();
        Value rhs = Parser(*this, rhs_text, line, rest_column + off + 2).parse_all();
        bool same;
        if (keyword == "expect-class") {
            if (!lhs.is_element() || !rhs.is_element())
                throw ScriptError("expect-class compares elements", line, rest_column);
            Element a = lhs.poly.is_zero() ? Element(signature()) : lhs.poly.coeff(0);
            Element b = rhs.poly.is_zero() ? Element(signature()) : rhs.poly.coeff(0);
            same = LieClass(pva(), a) == LieClass(pva(), b);
        } else {
            same = lhs == rhs;
        }
        bool ok = same == equal;
        out_ << verdict(ok) << " " << keyword << " " << trim(lhs_text) << (equal ? " == " : " != ") << trim(rhs_text);
        if (!ok) out_ << "\n  left:  " << to_string(lhs) << "\n  right: " << to_string(rhs);
        out_ << "\n";
        return ok;
    }
    if (command_keywords.count(keyword) && separated) return command(keyword, rest, line, column);

    Parser p(*this, text, line, column);
    out_ << to_string(p.parse_all()) << "\n";
    return true;
}

void Interpreter::declare(const std::string& keyword, std::string_view rest, int line, int column) {
    if (sig_) throw ScriptError(keyword + " must come before the algebra is used", line, column);
    std::vector<std::string> words;
    {
        std::stringstream ss{std::string(rest)};
        std::string wd;
        while (ss >> wd) words.push_back(wd);
    }
    auto bad = [&](const std::string& msg) { throw ScriptError(msg, line, column); };
    if (words.empty()) bad(keyword + " needs a name");
    const std::string& name = words[0];
    if (!is_ident_start(name[0]) || !std::all_of(name.begin(), name.end(), is_ident_char))
        bad("'" + name + "' is not an identifier");
    if (reserved.count(name) || function_names.count(name)) bad("'" + name + "' is reserved");
    auto taken = [&](const std::string& n) {
        for (const auto& g : gens_)
            if (g.name == n) return true;
        for (const auto& p : params_)
            if (p.name == n) return true;
        return std::find(base_.begin(), base_.end(), n) != base_.end();
    };
    if (taken(name)) bad("'" + name + "' is declared twice");
    auto parity = [&](const std::string& w) {
        if (w == "even") return false;
        if (w == "odd") return true;
        bad("expected even or odd, got '" + w + "'");
    };
    auto integer = [&](const std::string& w) {
        try {
            size_t used = 0;
            int v = std::stoi(w, &used);
            if (used == w.size() && v >= 0) return v;
        } catch (const std::exception&) {
        }
        bad("expected a non-negative integer, got '" + w + "'");
    };
    if (keyword == "base") {
        if (words.size() != 1) bad("expected 'base NAME'");
        base_.push_back(name);
    } else if (keyword == "param") {
        if (words.size() < 2 || words.size() > 3) bad("expected 'param NAME even|odd [N]'");
        ParameterSpec p{name, parity(words[1]), words.size() == 3 ? integer(words[2]) : 2};
        if (p.nilpotency < 1) bad("nilpotency order must be >= 1");
        params_.push_back(p);
    } else {
        if (words.size() < 3 || words.size() > 4) bad("expected 'gen NAME even|odd WEIGHT [unit]'");
        GeneratorSpec g{name, parity(words[1]), integer(words[2]), false};
        if (words.size() == 4) {
            if (words[3] != "unit") bad("expected 'unit', got '" + words[3] + "'");
            if (g.odd || g.weight != 0) bad("only even weight-0 generators can be units");
            g.invertible = true;
        }
        gens_.push_back(g);
    }
    preset_.clear();
}

bool Interpreter::command(const std::string& keyword, std::string_view rest, int line, int column) {
    Command c;
    c.name = keyword;
    c.line = line;
    c.column = column;
    // positional text runs up to the first whitespace-preceded "--"
    size_t cut = rest.size();
    for (size_t k = 0; k + 1 < rest.size(); ++k)
        if (rest[k] == '-' && rest[k + 1] == '-' && (k == 0 || std::isspace(static_cast<unsigned char>(rest[k - 1])))) {
            cut = k;
            break;
        }
    std::string_view pos = rest.substr(0, cut);
    size_t lead = pos.find_first_not_of(" \t\r");
    c.positional_column = column + static_cast<int>(keyword.size() + (lead == std::string_view::npos ? 0 : lead));
    c.positional = std::string(trim(pos));
    std::string_view flags = rest.substr(cut);
    while (!flags.empty()) {
        flags = trim(flags);
        if (flags.empty()) break;
        size_t next = flags.size();
        for (size_t k = 2; k + 1 < flags.size(); ++k)
            if (flags[k] == '-' && flags[k + 1] == '-' && std::isspace(static_cast<unsigned char>(flags[k - 1]))) {
                next = k;
                break;
            }
        std::string_view chunk = trim(flags.substr(2, next - 2));
        size_t sp = chunk.find_first_of(" \t");
        std::string name(chunk.substr(0, sp));
        std::string value(sp == std::string_view::npos ? "" : trim(chunk.substr(sp)));
        if (name.empty()) c.usage("empty flag");
        if (boolean_flags.count(name)) {
            if (!value.empty()) c.usage("--" + name + " takes no value");
        } else if (value.empty()) {
            c.usage("--" + name + " needs a value");
        }
        c.flags[name] = value;
        flags = flags.substr(next);
    }

    if (keyword == "preset") {
        c.allow({});
        if (c.positional.empty()) c.usage("needs a preset name");
        load_preset(c.positional);
        out_ << "preset " << preset_ << ":";
        for (const auto& g : sig_->generators()) out_ << " " << g.name;
        if (!bindings_.empty()) {
            out_ << "; bindings";
            for (const auto& [n, v] : bindings_) out_ << " " << n;
        }
        out_ << "\n";
        return true;
    }
    if (keyword == "validate") return cmd_validate(c);
    if (keyword == "axioms") return cmd_axioms(c);
    if (keyword == "htwist") return cmd_htwist(c);
    if (keyword == "shear") return cmd_shear(c);
    if (keyword == "wzw-verify") return cmd_wzw(c);
    if (keyword == "sugawara-verify") return cmd_sugawara(c);
    if (keyword == "euler-lagrange") return cmd_euler_lagrange(c);
    if (keyword == "noether") return cmd_noether(c);
    if (keyword == "legendre") return cmd_legendre(c);
    if (keyword == "n2-verify") return cmd_n2(c);
    if (keyword == "schouten-check") return cmd_schouten(c);
    if (keyword == "mc-check") return cmd_mc(c);
    if (keyword == "qcoh") return cmd_qcoh(c);
    return cmd_dump(c);
}

// ---------------------------------------------------------------- individual commands

bool Interpreter::cmd_validate(const Command& c) {
    c.allow({"nmax"});
    if (!c.positional.empty()) load_preset(c.positional);
    std::optional<int> nmax;
    if (c.has("nmax")) nmax = c.get_int("nmax", 0);
    ValidationReport rep = validate(pva(), nmax);
    std::string s = rep.summary();
    out_ << s.substr(0, 4) << " validate" << (preset_.empty() ? "" : " " + preset_) << s.substr(4) << "\n";
    return rep.passed();
}

bool Interpreter::cmd_axioms(const Command& c) {
    c.allow({"samples", "weight", "degree", "seed"});
    c.no_positional();
    AxiomSample s = sample_axioms(pva(), c.get_int("samples", 100), c.get_int("weight", 3), c.get_int("degree", 3),
                                  static_cast<unsigned>(c.get_int("seed", 1)));
    out_ << verdict(s.passed()) << " axioms: " << s.summary() << "\n";
    return s.passed();
}

bool Interpreter::cmd_htwist(const Command& c) {
    c.allow({"apply", "expect"});
    if (c.positional.empty()) c.usage("needs a 3-form");
    Value v = Parser(*this, c.positional, c.line, c.positional_column).parse_all();
    if (!v.is_form || v.form.degree() != 3) c.usage("needs a 3-form");
    Svdo S = svdo_context();
    bool closed = is_closed(S, v.form);
    Svdo Q = h_twist(S, v.form);
    ValidationReport rep = validate(Q.pva);
    bool jacobi = rep.jacobi_ok && rep.skew_ok;
    bool ok = closed == jacobi;
    if (c.has("expect")) {
        std::string e = c.get("expect");
        if (e != "closed" && e != "open") c.usage("--expect takes closed or open");
        ok = ok && closed == (e == "closed");
    }
    out_ << verdict(ok) << " htwist: form " << (closed ? "closed" : "not closed") << ", twisted bracket "
         << (jacobi ? "passes" : "fails") << " validate (n_max " << rep.n_max << ")\n";
    if (rep.jacobi_failure) out_ << "  jacobi witness: " << rep.jacobi_failure->detail << "\n";
    if (c.has("apply") && ok) {
        svdo_ = Q;
        sig_ = Q.pva.signature();
        table_ = Q.pva.table();
        pva_ = Q.pva;
    }
    return ok;
}

bool Interpreter::cmd_shear(const Command& c) {
    c.allow({"expect-automorphism"});
    if (c.positional.empty()) c.usage("needs a 2-form");
    Value v = Parser(*this, c.positional, c.line, c.positional_column).parse_all();
    if (!v.is_form || v.form.degree() != 2) c.usage("needs a 2-form");
    Svdo S = svdo_context();
    const TargetForm& alpha = v.form;
    TargetForm da = de_rham(S, alpha);
    ShearReport rep = b_field_shear(S, alpha);
    bool discrepancy = rep.discrepancy == da;
    bool intertwine = intertwines(rep.map, h_twist(S, da).pva, S.pva);
    bool consistent = rep.automorphism == da.is_zero();
    Substitution back = shear_map(S, -alpha);
    bool inverse = is_identity_on_generators(compose(back, rep.map)) && is_identity_on_generators(compose(rep.map, back));
    bool ok = discrepancy && intertwine && consistent && inverse;
    if (c.has("expect-automorphism")) ok = ok && rep.automorphism && intertwines(rep.map, S.pva, S.pva);
    out_ << verdict(ok) << " shear: d(alpha) " << (da.is_zero() ? "= 0" : "!= 0") << ", "
         << (rep.automorphism ? "automorphism" : "not an automorphism") << "; maps the twist by d(alpha) onto the bracket: "
         << (intertwine ? "yes" : "no") << "; composition with the inverse shear is the identity: "
         << (inverse ? "yes" : "no") << "\n";
    if (!discrepancy) out_ << "  discrepancy " << to_string(Value::of(rep.discrepancy)) << " differs from d(alpha)\n";
    return ok;
}

bool Interpreter::cmd_wzw(const Command& c) {
    c.allow({"n", "k"});
    c.no_positional();
    if (c.has("n") || c.has("k")) {
        int n = c.get_int("n", 1);
        if (n != 1 && n != 2) c.usage("--n must be 1 or 2");
        load_preset("wzw:gl" + std::to_string(n) + ":" + to_string(c.get_rational("k", 1)));
    }
    if (!wzw_) c.usage("needs a wzw preset (or --n N --k K)");
    AffineReport rep = verify_affine(*wzw_);
    out_ << rep.summary() << "\n";
    bool fixture = check_fixture(affine_file, wzw_key(wzw_->n, wzw_->k), to_fixture(rep));
    return rep.passed && fixture;
}

bool Interpreter::cmd_sugawara(const Command& c) {
    c.allow({"n", "k"});
    c.no_positional();
    if (c.has("n") || c.has("k")) {
        int n = c.get_int("n", 1);
        if (n != 1 && n != 2) c.usage("--n must be 1 or 2");
        load_preset("wzw:gl" + std::to_string(n) + ":" + to_string(c.get_rational("k", 1)));
    }
    if (!wzw_) c.usage("needs a wzw preset (or --n N --k K)");
    if (wzw_->k == 0) c.usage("the Sugawara element needs k != 0");
    SugawaraReport rep = verify_sugawara(*wzw_);
    out_ << verdict(rep.passed) << " sugawara: {L_lam L} = " << (rep.virasoro.sign == 1 ? "" : "-")
         << "(T + 2 lam) L + " << to_string(rep.virasoro.central) << " lam^3; {L_lam j_l} central terms "
         << join_rationals(rep.primary_central) << "; {L_lam j_r} "
         << (rep.commutes_with_right ? "= 0" : "!= 0") << "\n";
    for (const auto& f : rep.failures) out_ << "  " << f << "\n";
    bool fixture = check_fixture(sugawara_file, wzw_key(wzw_->n, wzw_->k), to_fixture(rep));
    return rep.passed && fixture;
}


namespace {

// "sigma-flat" or "sigma-flat:N"
std::optional<int> sigma_preset_size(const std::string& text) {
    if (text == "sigma-flat") return 1;
    const std::string prefix = "sigma-flat:";
    if (text.rfind(prefix, 0) != 0) return std::nullopt;
    try {
        size_t used = 0;
        int n = std::stoi(text.substr(prefix.size()), &used);
        if (used == text.size() - prefix.size() && n >= 1) return n;
    } catch (const std::exception&) {
    }
    return std::nullopt;
}

Element sum_over_fields(const JetSpace& J, const std::function<Element(int)>& f) {
    Element r(J.signature());
    for (int j = 0; j < J.num_fields(); ++j) r += f(j);
    return r;
}

// Sums of c_k sigma^k on the Legendre target.
Element target_function(const Svdo& S, const std::vector<Rational>& f) {
    Element sigma = Element::base(S.signature(), "sigma"), r(S.signature()), power = Element::constant(S.signature(), 1);
    for (const auto& c : f) {
        r += c * power;
        power = power * sigma;
    }
    return r;
}

Element random_polyvector(std::mt19937& rng, const N2Model& M, int max_rank) {
    std::uniform_int_distribution<int> c(-3, 3), deg(0, 2), var(0, M.n - 1), rk(0, max_rank), coin(0, 1);
    Element r(M.signature());
    for (int t = 0; t < 3; ++t) {
        int a = c(rng);
        Element term = Element::constant(M.signature(), a == 0 ? 1 : a);
        for (int d = deg(rng); d > 0; --d) term = term * M.gen(M.x[var(rng)]);
        int rank = rk(rng);
        int taken = 0;
        for (int i = 0; i < M.n && taken < rank; ++i)
            if (coin(rng)) {
                term = term * M.gen(M.psi[i]);
                ++taken;
            }
        r += term;
    }
    return r;
}

std::map<std::pair<int, int>, int> nonzero(const CohomologyTable& t) {
    std::map<std::pair<int, int>, int> r;
    for (const auto& [k, v] : t.dims)
        if (v) r[k] = v;
    return r;
}

}  // namespace

bool Interpreter::cmd_euler_lagrange(const Command& c) {
    c.allow({"preset"});
    c.no_positional();
    int n = sigma_n_;
    if (c.has("preset")) {
        auto k = sigma_preset_size(c.get("preset"));
        if (!k) c.usage("--preset takes sigma-flat[:N]");
        n = *k;
        load_preset("sigma-flat:" + std::to_string(n));
    }
    if (!n) c.usage("needs --preset sigma-flat[:N]");
    SigmaModel M = sigma_flat(n);
    const JetSpace& J = M.space;
    EulerLagrangeResult el = euler_lagrange(J, M.lagrangian);
    bool exact = euler_lagrange_residual(J, M.lagrangian, el).is_zero();
    bool wave = true;
    for (int j = 0; j < n; ++j) wave = wave && el.euler[j] == J.x(j, 2) - J.x(j, 0, 2);
    bool ok = exact && wave;
    out_ << verdict(ok) << " euler-lagrange sigma-flat:" << n << ": E_j = d_tau^2 x^j - d_sigma^2 x^j "
         << (wave ? "holds" : "fails") << ", decomposition " << (exact ? "exact" : "inexact") << "\n";
    for (int j = 0; j < n; ++j) out_ << "  E_" << j + 1 << " = " << to_string(el.euler[j]) << "\n";
    out_ << "  gamma = " << to_string(el.gamma) << "\n";
    return ok;
}

bool Interpreter::cmd_noether(const Command& c) {
    c.allow({"preset", "xi", "f"});
    c.no_positional();
    int n = sigma_n_;
    if (c.has("preset")) {
        auto k = sigma_preset_size(c.get("preset"));
        if (!k) c.usage("--preset takes sigma-flat[:N]");
        n = *k;
        load_preset("sigma-flat:" + std::to_string(n));
    }
    if (!n) c.usage("needs --preset sigma-flat[:N]");
    std::string xi = c.get("xi");
    if (xi != "minus" && xi != "plus" && xi != "time") c.usage("--xi takes minus, plus or time");
    std::vector<Rational> f;
    try {
        f = parse_rational_list(c.get("f", "1"));
    } catch (const std::exception&) {
        c.usage("--f takes comma-separated rationals");
    }
    SigmaModel M = sigma_flat(n);
    const JetSpace& J = M.space;
    EulerLagrangeResult el = euler_lagrange(J, M.lagrangian);
    Symmetry sym = xi == "minus" ? sigma_xi_minus(M, f) : xi == "plus" ? sigma_xi_plus(M, f)
                                                                     : time_translation(J, M.lagrangian);
    bool symmetric = verify_symmetry(J, sym.characteristic, M.lagrangian, sym.alpha);
    Element F = noether(J, sym.characteristic, sym.alpha, el.gamma);
    bool conserved = check_conservation(J, M.lagrangian, F).conserved;
    bool matches = true;
    if (xi != "time") {
        int sign = xi == "minus" ? -1 : 1;
        Element fl = light_cone_function(J, f, sign);
        Element square = sum_over_fields(J, [&](int j) {
            Element v = J.x(j, 0, 1) + Rational(sign) * J.x(j, 1);
            return v * v;
        });
        // (sigma -/+ tau) currents: +/-1/4 f (x_sigma -/+ x_tau)^2 dsigma - 1/4 f (x_sigma -/+ x_tau)^2 dtau
        Element expected = Rational(-sign, 4) * fl * square * J.dsigma() - Rational(1, 4) * fl * square * J.dtau();
        matches = F == expected;
    }
    bool ok = symmetric && conserved && matches;
    out_ << verdict(ok) << " noether xi=" << xi << ": symmetry " << (symmetric ? "verified" : "fails") << ", current "
         << (conserved ? "conserved" : "not conserved");
    if (xi != "time") out_ << ", light-cone form " << (matches ? "matches" : "differs");
    out_ << "\n  F = " << to_string(F) << "\n";
    return ok;
}

bool Interpreter::cmd_legendre(const Command& c) {
    c.allow({"preset", "f"});
    c.no_positional();
    int n = sigma_n_;
    if (c.has("preset")) {
        auto k = sigma_preset_size(c.get("preset"));
        if (!k) c.usage("--preset takes sigma-flat[:N]");
        n = *k;
        load_preset("sigma-flat:" + std::to_string(n));
    }
    if (!n) c.usage("needs --preset sigma-flat[:N]");
    std::vector<Rational> f;
    try {
        f = parse_rational_list(c.get("f", "1"));
    } catch (const std::exception&) {
        c.usage("--f takes comma-separated rationals");
    }
    SigmaModel M = sigma_flat(n);
    const JetSpace& J = M.space;
    Legendre leg(J, M.lagrangian);
    const Svdo& S = leg.target();
    EulerLagrangeResult el = euler_lagrange(J, M.lagrangian);

    bool momenta = true;
    for (int j = 0; j < n; ++j) momenta = momenta && leg.momenta()[j] == J.x(j, 1);
    Element pp(S.signature()), tt(S.signature()), pt(S.signature());
    for (int j = 0; j < n; ++j) {
        pp += S.momentum(j) * S.momentum(j);
        tt += T(S.coordinate(j)) * T(S.coordinate(j));
        pt += S.momentum(j) * T(S.coordinate(j));
    }
    auto image = [&](const std::vector<Rational>& g, bool minus) {
        Symmetry s = minus ? sigma_xi_minus(M, g) : sigma_xi_plus(M, g);
        return leg.push(noether(J, s.characteristic, s.alpha, el.gamma));
    };
    Element fs = target_function(S, f);
    Element Lm = image(f, true), Lp = image(f, false);
    bool forms = Lm == fs * (Rational(1, 4) * pp + Rational(1, 4) * tt - Rational(1, 2) * pt) &&
                 Lp == fs * (Rational(-1, 4) * pp - Rational(1, 4) * tt - Rational(1, 2) * pt);

    // at f = 1 the images are the sigma-model Virasoro generators
    SigmaVirasoro V = sigma_virasoro(n);
    const SigPtr& vs = V.svdo.signature();
    Element plus = image({1}, true).rebase(vs), minus = image({1}, false).rebase(vs);
    bool generators = plus == V.plus && minus == V.minus;
    VirasoroCheck vp = check_virasoro(V.svdo.pva, plus), vm = check_virasoro(V.svdo.pva, minus);
    bool commute = lambda_bracket(V.svdo.pva, plus, minus).is_zero();
    bool ok = momenta && forms && generators && vp.ok && vm.ok && commute;
    out_ << verdict(ok) << " legendre sigma-flat:" << n << ": momenta x_j = d_tau x^j " << (momenta ? "ok" : "differ")
         << ", current images " << (forms ? "match" : "differ") << ", {L+_lam L-} " << (commute ? "= 0" : "!= 0")
         << ", Virasoro shape " << (vp.ok && vm.ok ? "ok" : "fails") << " (signs " << vp.sign << ", " << vm.sign
         << "; central " << to_string(vp.central) << ", " << to_string(vm.central) << ")\n";
    out_ << "  xi^- -> " << to_string(Lm) << "\n  xi^+ -> " << to_string(Lp) << "\n";
    bool fixture = check_fixture(sigma_virasoro_file, std::to_string(n), sigma_virasoro_fixture(n));
    return ok && fixture;
}

bool Interpreter::cmd_n2(const Command& c) {
    c.allow({"n"});
    c.no_positional();
    const N2Model& M = n2_context(c);
    const Pva& P = M.pva;
    N2Generators Q = n2_generators(M);
    bool nilpotent = lambda_bracket(P, Q.mm, Q.mm).is_zero() && lambda_bracket(P, Q.pp, Q.pp).is_zero();
    bool cross = true;
    for (const Element* a : {&Q.pp, &Q.pm})
        for (const Element* b : {&Q.mm, &Q.mp})
            for (int k = 0; k <= 3; ++k)
                cross = cross && nth_product(P, *a, *b, k).is_zero() && nth_product(P, *b, *a, k).is_zero();
    ClosureReport closure = n2_closure(M);
    bool ok = nilpotent && cross && closure.closed;
    out_ << verdict(ok) << " n2-verify n=" << M.n << ": Q-- and Q++ " << (nilpotent ? "nilpotent" : "not nilpotent")
         << ", cross-family products n=0..3 " << (cross ? "vanish" : "do not vanish") << ", family "
         << (closure.closed ? "closes" : "does not close") << "\n";
    out_ << "  L = " << to_string(closure.L) << "\n  J = " << to_string(closure.J) << "\n";
    for (const auto& f : closure.failures) out_ << "  " << f << "\n";
    bool fixture = check_fixture(n2_closure_file, std::to_string(M.n), to_fixture(closure));
    return ok && fixture;
}

bool Interpreter::cmd_schouten(const Command& c) {
    c.allow({"n", "pairs", "seed", "rank"});
    c.no_positional();
    const N2Model& M = n2_context(c);
    int pairs = c.get_int("pairs", 20), rank = c.get_int("rank", 2);
    std::mt19937 rng(static_cast<unsigned>(c.get_int("seed", 1)));
    int agree = 0;
    std::string first_failure;
    for (int i = 0; i < pairs; ++i) {
        Element a = random_polyvector(rng, M, rank), b = random_polyvector(rng, M, rank);
        Element vertex = schouten(M, a, b), classical = schouten_nijenhuis(M, a, b);
        if (vertex == classical) ++agree;
        else if (first_failure.empty())
            first_failure = "[" + to_string(a) + ", " + to_string(b) + "]: " + to_string(vertex) + " vs " + to_string(classical);
    }
    bool ok = agree == pairs;
    out_ << verdict(ok) << " schouten-check n=" << M.n << ": a_(0)(Q++_(0) b) equals the Schouten-Nijenhuis bracket on "
         << agree << "/" << pairs << " random pairs\n";
    if (!first_failure.empty()) out_ << "  " << first_failure << "\n";
    return ok;
}

bool Interpreter::cmd_mc(const Command& c) {
    c.allow({"n", "expect", "gauge", "vectors", "seed"});
    if (c.positional.empty()) c.usage("needs an odd element gamma");
    const N2Model& M = n2_context(c);
    Value gv = Parser(*this, c.positional, c.line, c.positional_column).parse_all();
    if (!gv.is_element()) c.usage("gamma must be an element");
    Element gamma = gv.poly.is_zero() ? Element(M.signature()) : gv.poly.coeff(0);
    std::string expect = c.get("expect", "zero");
    if (expect != "zero" && expect != "nonzero") c.usage("--expect takes zero or nonzero");
    McReport rep = mc_check(M, gamma, c.get_int("vectors", 10), static_cast<unsigned>(c.get_int("seed", 1)));
    bool zero = rep.residual.is_zero();
    bool ok = rep.identity_ok && zero == (expect == "zero");
    out_ << verdict(ok) << " mc-check: residual class " << (zero ? "0" : to_string(rep.residual.representative()))
         << "; deformed-differential identity " << (rep.identity_ok ? "holds" : "fails") << " on "
         << rep.vectors_checked << " vectors\n";
    if (c.has("gauge")) {
        if (M.signature()->find_parameter("eps") < 0) c.usage("--gauge needs the parameter eps");
        Value bv = Parser(*this, c.get("gauge"), c.line, c.column).parse_all();
        if (!bv.is_element()) c.usage("--gauge takes an element");
        Element beta = bv.poly.is_zero() ? Element(M.signature()) : bv.poly.coeff(0);
        Element eps = Element::parameter(M.signature(), "eps");
        LieClass after = mc_residual(M, gamma + eps * gauge_action(M, beta, gamma));
        Element change = after.representative() - rep.residual.representative() -
                         eps * nth_product(M.pva, rep.residual.representative(), beta, 0);
        bool gauge = LieClass(M.pva, change).is_zero();
        out_ << "  " << verdict(gauge) << " gauge: first-order change of the residual is eps (R_(0) beta) modulo T\n";
        ok = ok && gauge;
    }
    if (fixtures_)
        if (auto stored = fixtures_->find(mc_file, "witness"); stored && stored->value("gamma", "") == to_string(gamma)) {
            Json computed{{"gamma", to_string(gamma)}, {"residual", to_string(rep.residual.representative())}};
            bool same = *stored == computed;
            out_ << "  fixture " << mc_file << " [witness] " << (same ? "matches" : "differs") << "\n";
            ok = ok && same;
        }
    return ok;
}

bool Interpreter::cmd_qcoh(const Command& c) {
    c.allow({"n", "w", "d", "a-model", "expect-total"});
    c.no_positional();
    if (!c.has("w") || !c.has("d")) c.usage("needs --w W and --d D");
    const N2Model& M = n2_context(c);
    int W = c.get_int("w", 0), D = c.get_int("d", 0);
    if (W < 0 || D < 0) c.usage("--w and --d must be non-negative");
    Differential diff = c.has("a-model") ? Differential::AModel : Differential::HalfTwisted;
    auto start = std::chrono::steady_clock::now();
    CohomologyTable t = q_cohomology(M, W, D, diff);
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool ok = true;
    std::string comparison;
    if (diff == Differential::HalfTwisted) {
        bool same = nonzero(t) == nonzero(holomorphic_count(M, W, D));
        comparison = same ? ", equals the holomorphic count" : ", differs from the holomorphic count";
        ok = same;
    }
    if (c.has("expect-total")) {
        int want = c.get_int("expect-total", 0);
        if (t.total() != want) {
            comparison += ", expected total " + std::to_string(want);
            ok = false;
        }
    }
    std::ostringstream time;
    time.precision(2);
    time << std::fixed << seconds;
    out_ << verdict(ok) << " qcoh " << (diff == Differential::AModel ? "a-model" : "half-twisted") << " n=" << M.n
         << " W=" << W << " D=" << D << ": total " << t.total() << comparison << " (" << time.str() << " s)\n";
    for (const auto& [wf, dim] : t.dims)
        if (dim) out_ << "  weight " << wf.first << ", fermion " << wf.second << ": " << dim << "\n";
    bool fixture = check_fixture(qcoh_file, qcoh_key(M.n, W, D, diff), to_fixture(t));
    return ok && fixture;
}

bool Interpreter::cmd_dump(const Command& c) {
    c.allow({"json"});
    bool json = c.has("json");
    if (c.positional.empty() || c.positional == "pva") {
        const Pva& P = pva();
        if (json) {
            out_ << to_json(P).dump(2) << "\n";
        } else {
            const auto& gens = P.signature()->generators();
            for (const auto& [uv, poly] : P.table().entries())
                out_ << "set {" << gens[uv.first].name << ", " << gens[uv.second].name << "} = " << to_string(poly)
                     << "\n";
        }
        return true;
    }
    Value v = Parser(*this, c.positional, c.line, c.positional_column).parse_all();
    if (!json) out_ << to_string(v) << "\n";
    else if (v.is_form) out_ << to_json(v.form).dump() << "\n";
    else if (v.is_element()) out_ << to_json(v.poly.is_zero() ? Element(signature()) : v.poly.coeff(0)).dump() << "\n";
    else out_ << to_json(v.poly).dump() << "\n";
    return true;
}

}  // namespace vertex
