#ifndef VERTEX_FIXTURES_HPP
#define VERTEX_FIXTURES_HPP

#include "vertex/models.hpp"
#include "vertex/serialize.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace vertex {

// Structure constants computed by the engine and frozen as JSON files. A command recomputes
// its entry and compares it with the stored one.
Json to_fixture(const AffineReport& r);
Json to_fixture(const SugawaraReport& r);
Json to_fixture(const ClosureReport& r);
Json to_fixture(const CohomologyTable& t);

Json affine_fixture(int n, const Rational& k);
Json sugawara_fixture(int n, const Rational& k);
Json sigma_virasoro_fixture(int n);
Json n2_closure_fixture(int n);
Json qcoh_fixture(int n, int max_weight, int max_degree, Differential d);
Json mc_witness_fixture();

std::string wzw_key(int n, const Rational& k);  // "gl1:3"
std::string qcoh_key(int n, int max_weight, int max_degree, Differential d);

// File names inside a fixture directory.
inline constexpr const char* affine_file = "affine.json";
inline constexpr const char* sugawara_file = "sugawara.json";
inline constexpr const char* sigma_virasoro_file = "sigma_virasoro.json";
inline constexpr const char* n2_closure_file = "n2_closure.json";
inline constexpr const char* qcoh_file = "qcoh.json";
inline constexpr const char* mc_file = "mc.json";

// Writes every desk-case entry into dir.
void derive_fixtures(const std::filesystem::path& dir);

class FixtureStore {
public:
    explicit FixtureStore(std::filesystem::path dir) : dir_(std::move(dir)) {}
    const std::filesystem::path& directory() const { return dir_; }
    // nullopt when the file or the key is absent.
    std::optional<Json> find(const std::string& file, const std::string& key) const;

private:
    std::filesystem::path dir_;
};

}  // namespace vertex

#endif
