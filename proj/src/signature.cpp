#include "vertex/diffpoly.hpp"

#include <algorithm>
#include <set>

namespace vertex {

namespace {

// Graded lex with lower generator index as the larger variable.
bool lead_greater(const std::vector<int>& a, const std::vector<int>& b) {
    int da = 0, db = 0;
    for (int e : a) da += e;
    for (int e : b) db += e;
    if (da != db) return da > db;
    return a > b;
}

}  // namespace

SigPtr AlgebraSignature::make(std::vector<GeneratorSpec> generators, std::vector<std::string> base_variables,
                              std::vector<ParameterSpec> parameters, std::vector<UnitSpec> units) {
    auto sig = std::shared_ptr<AlgebraSignature>(new AlgebraSignature());
    std::set<std::string> names;
    auto claim = [&](const std::string& name) {
        if (name.empty()) throw VertexError("empty symbol name");
        if (!names.insert(name).second) throw VertexError("duplicate symbol name '" + name + "'");
    };
    for (const auto& g : generators) {
        claim(g.name);
        if (g.weight < 0) throw VertexError("negative weight for generator '" + g.name + "'");
        if (g.invertible && (g.odd || g.weight != 0))
            throw VertexError("generator '" + g.name + "' cannot be invertible: only even weight-0 generators can");
    }
    for (const auto& b : base_variables) claim(b);
    for (const auto& p : parameters) {
        claim(p.name);
        if (p.nilpotency < 1) throw VertexError("parameter '" + p.name + "' needs nilpotency order >= 1");
    }
    const int ng = static_cast<int>(generators.size());
    for (const auto& u : units) {
        claim(u.name);
        if (u.poly.empty()) throw VertexError("unit '" + u.name + "' has an empty polynomial");
        for (const auto& t : u.poly)
            for (auto [g, e] : t.powers) {
                if (g < 0 || g >= ng) throw VertexError("unit '" + u.name + "' references an unknown generator");
                if (generators[g].odd || generators[g].weight != 0 || e < 0)
                    throw VertexError("unit '" + u.name + "' must be a polynomial in even weight-0 generators");
            }
    }
    sig->generators_ = std::move(generators);
    sig->base_ = std::move(base_variables);
    sig->params_ = std::move(parameters);
    sig->units_ = std::move(units);
    for (const auto& u : sig->units_) {
        std::vector<int> best;
        Rational best_c = 0;
        std::map<std::vector<int>, Rational> collected;
        for (const auto& t : u.poly) {
            std::vector<int> e(ng, 0);
            for (auto [g, k] : t.powers) e[g] += k;
            collected[e] += t.coeff;
        }
        bool first = true;
        for (const auto& [e, c] : collected) {
            if (c == 0) continue;
            if (first || lead_greater(e, best)) {
                best = e;
                best_c = c;
                first = false;
            }
        }
        if (first) throw VertexError("unit '" + u.name + "' has a zero polynomial");
        bool constant = std::all_of(best.begin(), best.end(), [](int e) { return e == 0; });
        if (constant) throw VertexError("unit '" + u.name + "' must have a non-constant leading term");
        sig->unit_lead_.push_back(best);
        sig->unit_lead_coeff_.push_back(best_c);
    }
    return sig;
}

int AlgebraSignature::find_generator(std::string_view name) const {
    for (size_t i = 0; i < generators_.size(); ++i)
        if (generators_[i].name == name) return static_cast<int>(i);
    return -1;
}

int AlgebraSignature::find_base(std::string_view name) const {
    for (size_t i = 0; i < base_.size(); ++i)
        if (base_[i] == name) return static_cast<int>(i);
    return -1;
}

int AlgebraSignature::find_parameter(std::string_view name) const {
    for (size_t i = 0; i < params_.size(); ++i)
        if (params_[i].name == name) return static_cast<int>(i);
    return -1;
}

int AlgebraSignature::find_unit(std::string_view name) const {
    for (size_t i = 0; i < units_.size(); ++i)
        if (units_[i].name == name) return static_cast<int>(i);
    return -1;
}

int AlgebraSignature::generator_index(std::string_view name) const {
    int i = find_generator(name);
    if (i < 0) throw VertexError("unknown generator '" + std::string(name) + "'");
    return i;
}

bool AlgebraSignature::unit_mentions(int u, int gen) const {
    for (const auto& t : units_[u].poly)
        for (auto [g, e] : t.powers)
            if (g == gen && e > 0) return true;
    return false;
}

bool AlgebraSignature::same_as(const AlgebraSignature& o) const {
    if (this == &o) return true;
    if (generators_.size() != o.generators_.size() || base_ != o.base_ || params_.size() != o.params_.size() ||
        units_.size() != o.units_.size())
        return false;
    for (size_t i = 0; i < generators_.size(); ++i) {
        const auto &a = generators_[i], &b = o.generators_[i];
        if (a.name != b.name || a.odd != b.odd || a.weight != b.weight || a.invertible != b.invertible) return false;
    }
    for (size_t i = 0; i < params_.size(); ++i) {
        const auto &a = params_[i], &b = o.params_[i];
        if (a.name != b.name || a.odd != b.odd || a.nilpotency != b.nilpotency) return false;
    }
    for (size_t i = 0; i < units_.size(); ++i) {
        if (units_[i].name != o.units_[i].name || unit_lead_[i] != o.unit_lead_[i]) return false;
        if (units_[i].poly.size() != o.units_[i].poly.size()) return false;
        for (size_t j = 0; j < units_[i].poly.size(); ++j)
            if (units_[i].poly[j].coeff != o.units_[i].poly[j].coeff ||
                units_[i].poly[j].powers != o.units_[i].poly[j].powers)
                return false;
    }
    return true;
}

SigPtr AlgebraSignature::with_base_variables(const std::vector<std::string>& names) const {
    auto base = base_;
    for (const auto& n : names)
        if (std::find(base.begin(), base.end(), n) == base.end()) base.push_back(n);
    if (base.size() == base_.size()) return make(generators_, base_, params_, units_);
    return make(generators_, base, params_, units_);
}

SigPtr AlgebraSignature::with_parameters(const std::vector<ParameterSpec>& specs) const {
    auto params = params_;
    for (const auto& p : specs) {
        bool present = std::any_of(params.begin(), params.end(), [&](const ParameterSpec& q) { return q.name == p.name; });
        if (!present) params.push_back(p);
    }
    return make(generators_, base_, params, units_);
}

void require_same_signature(const SigPtr& a, const SigPtr& b) {
    if (!a || !b || a == b) return;
    if (!a->same_as(*b)) throw SignatureMismatch("operands live over different signatures");
}

}  // namespace vertex
