#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "pgz/json_io.hpp"

namespace pgz {

inline constexpr const char* kVersion = "0.1.0";

const std::vector<std::string>& known_suites();

struct SweepSpec {
    std::vector<int64_t> primes = {2, 3, 5, 7};
    std::vector<std::string> quad_types = {"split", "inert", "ramified"};
    std::vector<int64_t> ramified_primes = {3, 5};
    int conductor_max = 2;
    // Mono descriptors; "unit" is a fixed p-adic unit rational per prime
    std::vector<json> alpha_values = {1, -1, "zeta(3)", "zeta(4)", "unit"};
    // integers prime to p, or "gen" for the smallest primitive root (3 at p = 2)
    std::vector<json> psi_twists = {1, "gen"};
    std::vector<std::string> suites = known_suites();
    uint64_t budget = 10000000;
    int chars_per_conductor = 2;
    // toric tuples: max conductor of chi_w and of omega
    int toric_conductor_max = 2;
    int toric_omega_max = 1;
    int kappa_min = -2, kappa_max = 4;  // v(a) range for eis-dichotomy
    int dkernel_max = 4;
    int qexp_cases = 200;
    int a_max = 50;
    uint64_t seed = 1;
};

SweepSpec spec_from_json(const json& j);
json spec_to_json(const SweepSpec& s);
// "key = value" lines with JSON values (bare words read as strings); '#' comments
json parse_kv_text(const std::string& text);
SweepSpec spec_from_text(const std::string& text);

struct SweepCase {
    std::string key;
    std::string suite;
    json inputs;
};

struct CaseRecord {
    std::string key, suite;
    json inputs;
    json lhs, rhs;
    bool pass = false;
    std::string error;
    json flags = json::object();
    double timing_ms = 0;
};

json record_to_json(const CaseRecord& r);

std::vector<SweepCase> enumerate_cases(const SweepSpec& spec);
CaseRecord run_case(const SweepCase& c, uint64_t budget, std::ostream* explain = nullptr);

struct Report {
    std::vector<CaseRecord> cases;  // sorted by key
    json to_json(const SweepSpec& spec) const;
    bool all_pass() const;
};

Report run_suite(const SweepSpec& spec, int threads = 1);
// re-runs one case of the sweep with the intermediate values written out; UnknownCase for bad ids
std::string explain(const SweepSpec& spec, const std::string& case_id);

// helpers shared with the CLI
Mono alpha_for_prime(const json& a, int64_t p);
int64_t twist_for_prime(const json& s, int64_t p);
std::string label_of(const json& j);

}  // namespace pgz
