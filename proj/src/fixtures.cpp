#include "vertex/fixtures.hpp"

#include <fstream>

namespace vertex {

namespace {

Json rationals(const std::vector<Rational>& v) {
    Json j = Json::array();
    for (const auto& q : v) j.push_back(to_string(q));
    return j;
}

Json virasoro_json(const VirasoroCheck& c) {
    return {{"ok", c.ok}, {"sign", c.sign}, {"central", to_string(c.central)}};
}

void write(const std::filesystem::path& file, const Json& j) {
    std::ofstream out(file);
    if (!out) throw VertexError("cannot write " + file.string());
    out << j.dump(2) << "\n";
}

}  // namespace

std::string wzw_key(int n, const Rational& k) { return "gl" + std::to_string(n) + ":" + to_string(k); }

std::string qcoh_key(int n, int max_weight, int max_degree, Differential d) {
    return std::string(d == Differential::AModel ? "a-model" : "half-twisted") + ":n" + std::to_string(n) + ":w" +
           std::to_string(max_weight) + ":d" + std::to_string(max_degree);
}

Json to_fixture(const AffineReport& r) {
    return {{"passed", r.passed},
            {"left_level", to_string(r.left_level)},
            {"right_level", to_string(r.right_level)},
            {"pairs_checked", r.pairs_checked}};
}

Json to_fixture(const SugawaraReport& r) {
    return {{"passed", r.passed},
            {"virasoro", virasoro_json(r.virasoro)},
            {"primary_central", rationals(r.primary_central)},
            {"commutes_with_right", r.commutes_with_right}};
}

Json to_fixture(const ClosureReport& r) {
    Json entries = Json::array();
    for (const auto& e : r.entries) {
        Json c = Json::object();
        for (size_t i = 0; i < e.coefficients.size(); ++i)
            if (e.coefficients[i] != 0) c[r.basis_names[i]] = to_string(e.coefficients[i]);
        entries.push_back({{"left", e.left}, {"right", e.right}, {"lambda", e.lambda_power}, {"coefficients", c}});
    }
    return {{"closed", r.closed}, {"L", to_string(r.L)}, {"J", to_string(r.J)}, {"entries", entries}};
}

Json to_fixture(const CohomologyTable& t) {
    Json dims = Json::array();
    for (const auto& [wf, dim] : t.dims) dims.push_back({wf.first, wf.second, dim});
    return {{"dims", dims}, {"total", t.total()}};
}

Json affine_fixture(int n, const Rational& k) { return to_fixture(verify_affine(n, k)); }

Json sugawara_fixture(int n, const Rational& k) { return to_fixture(verify_sugawara(wzw_model(n, k))); }

Json sigma_virasoro_fixture(int n) {
    SigmaVirasoro V = sigma_virasoro(n);
    const Pva& P = V.svdo.pva;
    return {{"plus", virasoro_json(check_virasoro(P, V.plus))},
            {"minus", virasoro_json(check_virasoro(P, V.minus))},
            {"zero", virasoro_json(check_virasoro(P, V.zero))},
            {"plus_minus_bracket", to_string(lambda_bracket(P, V.plus, V.minus))}};
}

Json n2_closure_fixture(int n) { return to_fixture(n2_closure(n2_flat(n))); }

Json qcoh_fixture(int n, int max_weight, int max_degree, Differential d) {
    return to_fixture(q_cohomology(n2_flat(n), max_weight, max_degree, d));
}

Json mc_witness_fixture() {
    N2Model M = n2_flat(2);
    Element witness = Element::parameter(M.signature(), "eps") * M.gen(M.xb[0]) * M.gen(M.psi[0]);
    return {{"gamma", to_string(witness)}, {"residual", to_string(mc_residual(M, witness).representative())}};
}

void derive_fixtures(const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const std::vector<std::pair<int, Rational>> wzw_cases{{1, 1}, {1, 3}, {1, -2}, {2, 1}, {2, -3}};
    Json affine = Json::object(), sugawara = Json::object();
    for (const auto& [n, k] : wzw_cases) {
        affine[wzw_key(n, k)] = affine_fixture(n, k);
        sugawara[wzw_key(n, k)] = sugawara_fixture(n, k);
    }
    write(dir / affine_file, affine);
    write(dir / sugawara_file, sugawara);

    Json sigma = Json::object();
    for (int n = 1; n <= 3; ++n) sigma[std::to_string(n)] = sigma_virasoro_fixture(n);
    write(dir / sigma_virasoro_file, sigma);

    write(dir / n2_closure_file, Json{{"1", n2_closure_fixture(1)}, {"2", n2_closure_fixture(2)}});

    Json qcoh = Json::object();
    for (int w = 0; w <= 2; ++w)
        qcoh[qcoh_key(1, w, 2, Differential::HalfTwisted)] = qcoh_fixture(1, w, 2, Differential::HalfTwisted);
    qcoh[qcoh_key(1, 0, 0, Differential::HalfTwisted)] = qcoh_fixture(1, 0, 0, Differential::HalfTwisted);
    qcoh[qcoh_key(2, 1, 1, Differential::HalfTwisted)] = qcoh_fixture(2, 1, 1, Differential::HalfTwisted);
    qcoh[qcoh_key(1, 0, 2, Differential::AModel)] = qcoh_fixture(1, 0, 2, Differential::AModel);
    write(dir / qcoh_file, qcoh);

    write(dir / mc_file, Json{{"witness", mc_witness_fixture()}});
}

std::optional<Json> FixtureStore::find(const std::string& file, const std::string& key) const {
    std::ifstream in(dir_ / file);
    if (!in) return std::nullopt;
    Json j = Json::parse(in);
    if (!j.contains(key)) return std::nullopt;
    return j.at(key);
}

}  // namespace vertex
