#include "vertex/diffpoly.hpp"

namespace vertex {

Substitution::Substitution(SigPtr source, SigPtr target) : source_(std::move(source)), target_(std::move(target)) {}

void Substitution::set_generator(int gen, Element image) {
    require_same_signature(target_, image.signature());
    const auto& g = source_->generators().at(gen);
    auto par = image.parity();
    if (par && *par != g.odd) throw VertexError("substitution image of '" + g.name + "' has the wrong parity");
    gens_[gen] = image.rebase(target_);
}

void Substitution::set_jet(JetVar v, Element image) {
    require_same_signature(target_, image.signature());
    jets_[v] = image.rebase(target_);
}

void Substitution::set_base(int index, Element image) {
    require_same_signature(target_, image.signature());
    base_[index] = image.rebase(target_);
}

Element Substitution::image(int gen) const { return jet_image({gen, 0}); }

Element Substitution::jet_image(JetVar v) const {
    if (auto it = jets_.find(v); it != jets_.end()) return it->second;
    if (auto it = gens_.find(v.gen); it != gens_.end()) return total_derivative_power(it->second, v.order);
    const auto& name = source_->generators()[v.gen].name;
    int t = target_->find_generator(name);
    if (t < 0) throw VertexError("substitution: no image for generator '" + name + "'");
    return Element::jet(target_, t, v.order);
}

Element Substitution::apply(const Element& a) const {
    require_same_signature(source_, a.signature());
    const auto& s = *source_;
    Element r(target_);
    std::map<JetVar, Element> cache;
    auto image_of = [&](JetVar v) -> const Element& {
        auto it = cache.find(v);
        if (it == cache.end()) it = cache.emplace(v, jet_image(v)).first;
        return it->second;
    };
    for (const auto& [m, c] : a.terms()) {
        Element term = Element::constant(target_, c);
        for (size_t p = 0; p < s.parameters().size(); ++p) {
            int e = m.extra[s.param_slot(static_cast<int>(p))];
            if (!e) continue;
            int t = target_->find_parameter(s.parameters()[p].name);
            if (t < 0) throw VertexError("substitution: parameter '" + s.parameters()[p].name + "' missing in target");
            term = term * pow(Element::parameter(target_, t), e);
        }
        for (const auto& f : m.jets) {
            if (f.exp < 0) {
                if (gens_.count(f.gen) || jets_.count({f.gen, 0}))
                    throw VertexError("substitution: cannot invert the image of a Laurent generator");
                int t = target_->find_generator(s.generators()[f.gen].name);
                if (t < 0) throw VertexError("substitution: no image for generator '" + s.generators()[f.gen].name + "'");
                term = term * pow(Element::inverse(target_, t), -f.exp);
                continue;
            }
            term = term * pow(image_of({f.gen, f.order}), f.exp);
        }
        for (size_t b = 0; b < s.base_variables().size(); ++b) {
            int e = m.extra[s.base_slot(static_cast<int>(b))];
            if (!e) continue;
            Element img;
            if (auto it = base_.find(static_cast<int>(b)); it != base_.end()) {
                img = it->second;
            } else {
                int t = target_->find_base(s.base_variables()[b]);
                if (t < 0) throw VertexError("substitution: base variable '" + s.base_variables()[b] + "' missing in target");
                img = Element::base(target_, t);
            }
            term = term * pow(img, e);
        }
        for (size_t u = 0; u < s.units().size(); ++u) {
            int e = m.extra[s.unit_slot(static_cast<int>(u))];
            if (!e) continue;
            for (const auto& t : s.units()[u].poly)
                for (auto [g, k] : t.powers)
                    if (gens_.count(g) || jets_.count({g, 0}))
                        throw VertexError("substitution: generators inside a unit must be fixed");
            int t = target_->find_unit(s.units()[u].name);
            if (t < 0) throw VertexError("substitution: unit '" + s.units()[u].name + "' missing in target");
            term = term * pow(Element::unit(target_, t), e);
        }
        r += term;
    }
    return r;
}

}  // namespace vertex
