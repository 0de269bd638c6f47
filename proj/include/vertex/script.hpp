#ifndef VERTEX_SCRIPT_HPP
#define VERTEX_SCRIPT_HPP

#include "vertex/fixtures.hpp"
#include "vertex/models.hpp"
#include "vertex/varcalc.hpp"

#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vertex {

// Syntax, usage and name errors; line and column are 1-based.
struct ScriptError : VertexError {
    ScriptError(const std::string& message, int line, int column);
    int line, column;
    std::string message;
};

enum ExitCode { exit_ok = 0, exit_failed = 1, exit_usage = 2 };

// Either a lambda-polynomial (an Element when its degree is <= 0) or a target form.
struct Value {
    bool is_form = false;
    LambdaPolynomial poly;
    TargetForm form;

    static Value of(const Element& e) { return {false, LambdaPolynomial::constant(e), {}}; }
    static Value of(LambdaPolynomial p) { return {false, std::move(p), {}}; }
    static Value of(TargetForm f) { return {true, {}, std::move(f)}; }
    bool is_element() const { return !is_form && poly.degree() <= 0; }
    bool operator==(const Value& o) const;
};

// Text that parses back to an equal value.
std::string to_string(const Value& v);

// Statements end at a newline or ';' and '#' starts a comment. Declarations (gen, base, param)
// come before anything that uses the algebra; a preset replaces them.
//
//   gen NAME even|odd WEIGHT [unit]     param NAME even|odd [N]     base NAME
//   set {u, v} = EXPR                   let NAME = EXPR             print EXPR
//   expect A == B   expect A != B       expect-class A == B         EXPR
//
// Expressions: rationals, names, lam, + - * and / by a constant, ^ with integer exponents,
// postfix x' and x'(m), prefix T, calls bracket(a, b), nprod(a, b, n), lie(a, b), euler(a, g),
// inv(x), d(form) and dx(i, j, ...) with 1-based coordinate indices. form * form is the wedge.
//
// Commands take positional text first and then --flags:
//   preset NAME, validate [PRESET] [--nmax N], axioms, htwist FORM, shear FORM, wzw-verify,
//   sugawara-verify, euler-lagrange, noether, legendre, n2-verify, schouten-check, mc-check GAMMA,
//   qcoh --w W --d D, dump VALUE|pva [--json].
class Interpreter {
public:
    explicit Interpreter(std::ostream& out);
    ~Interpreter();

    void set_fixtures(std::optional<FixtureStore> store) { fixtures_ = std::move(store); }

    // Returns an ExitCode. Errors are reported on the output stream.
    int run(std::string_view text);
    // One statement; false on a verification failure. Throws ScriptError or VertexError.
    bool run_statement(std::string_view text, int line = 1, int column = 1);

    Value evaluate(std::string_view expr);
    Element parse_element(std::string_view expr);
    void load_preset(const std::string& name);

    bool has_algebra() const { return static_cast<bool>(sig_); }
    const Pva& pva();
    const SigPtr& signature();

private:
    struct Parser;
    struct Command;
    friend struct Parser;

    void freeze();
    void declare(const std::string& keyword, std::string_view rest, int line, int column);
    bool command(const std::string& keyword, std::string_view rest, int line, int column);
    Svdo svdo_context();
    const N2Model& n2_context(const Command& c);
    bool check_fixture(const std::string& file, const std::string& key, const Json& computed);

    bool cmd_validate(const Command& c);
    bool cmd_axioms(const Command& c);
    bool cmd_htwist(const Command& c);
    bool cmd_shear(const Command& c);
    bool cmd_wzw(const Command& c);
    bool cmd_sugawara(const Command& c);
    bool cmd_euler_lagrange(const Command& c);
    bool cmd_noether(const Command& c);
    bool cmd_legendre(const Command& c);
    bool cmd_n2(const Command& c);
    bool cmd_schouten(const Command& c);
    bool cmd_mc(const Command& c);
    bool cmd_qcoh(const Command& c);
    bool cmd_dump(const Command& c);

    std::ostream& out_;
    std::optional<FixtureStore> fixtures_;

    // Declarations until the algebra is frozen.
    std::vector<GeneratorSpec> gens_;
    std::vector<std::string> base_;
    std::vector<ParameterSpec> params_;

    SigPtr sig_;
    BracketTable table_;
    std::optional<Pva> pva_;
    std::map<int, Element> twist_;
    std::map<std::string, Value> bindings_;

    std::string preset_;
    std::optional<Svdo> svdo_;
    std::unique_ptr<WzwModel> wzw_;
    std::unique_ptr<N2Model> n2_;
    int sigma_n_ = 0;
};

}  // namespace vertex

#endif
