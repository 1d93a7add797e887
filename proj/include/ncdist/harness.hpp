#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ncdist/algebra.hpp"
#include "ncdist/filtration.hpp"
#include "ncdist/martingale.hpp"
#include "ncdist/spaces.hpp"
#include "ncdist/step_function.hpp"

namespace ncdist {

/// Check kinds. The distributional tags compare a singular value function
/// against a Hardy-transformed one (pointwise or by prefix integrals); the
/// classical tags record Lp ratios normalized by the expected order in p;
/// the *_ID tags are exact algebraic identities.
enum class CheckKind {
    DST,
    DDD,
    DMT,
    DBG_LOWER,
    DBG_UPPER,
    ST,
    DD,
    MT,
    BG,
    WEAK11,
    GUNDY,
    MOMENT_EQ,
    ORLICZ_COINCIDENCE,
    CSTAR_FACT,
    CORNER_DEMO,
    DFWW,
    PHI_LEM,
    QB_PAIR,
    EXTRAP1,
    EXTRAP2,
    CESARO_LP,
    CSTAR_LP,
    LOG_KERNEL_ID,
    TRACE_SCALING_ID,
    CORNER_ID,
    COLUMN_EMBED_ID,
    DOOB_FACTOR_ID,
    CE_AXIOMS,
    DUALITY_ID,
};

std::string kind_name(CheckKind k);
std::optional<CheckKind> kind_from_name(const std::string& name);

struct KindParams {
    double p = 2.0;              // ST / DD / MT / BG / CESARO_LP / CSTAR_LP
    double lambda_factor = 0.0;  // GUNDY threshold multiple of |x|_1 / tau(1); 0 = sampled
    int dfww_n = 1024;           // DFWW truncation length; also the CORNER_DEMO size
    OrliczFn Phi = OrliczFn::expm1();  // PHI_LEM
    std::string map_name = "sign_transform";  // EXTRAP1 / EXTRAP2 exemplar
    bool commutative_only = false;             // GUNDY suite selector
};

struct DimCaps {
    int max_dim = 32;
    int max_levels = 6;
};

struct Instance {
    std::string digest;
    std::optional<Filtration> F;
    std::vector<TracedElement> xs;  // per-kind payload
    std::vector<int> signs;
    std::vector<TracedElement> xi;  // generalized multipliers
    StepFunction f;                 // function-side payload
    StepFunction g;
    double lambda = 1.0;  // GUNDY threshold
    int n = 0;            // DFWW / CORNER_DEMO size
    std::uint64_t seed = 0;
};

/// Deterministic from (kind, params, caps, seed); weight_scale multiplies all
/// algebra weights (used by the trace-scaling invariance checks).
Instance generate_instance(CheckKind kind, const KindParams& params, const DimCaps& caps,
                           std::uint64_t seed, double weight_scale = 1.0);

struct CheckResult {
    std::string kind;
    std::string digest;
    std::string lhs;
    std::string rhs;
    double sup_ratio = 0.0;
    double witness_t = 0.0;
    double budget = 0.0;
    bool pass = true;
    std::map<std::string, double> extra;
};

CheckResult check(CheckKind kind, const KindParams& params, const Instance& inst, double tol);

struct ConstantEstimate {
    std::string kind;
    int trials = 0;
    int errors = 0;  // failed trials are recorded, not fatal
    double sup_ratio = 0.0;
    std::string argmax_digest;
    std::vector<std::pair<double, double>> curve;  // (p, ratio) when applicable
};

ConstantEstimate estimate_constant(CheckKind kind, const KindParams& params, const DimCaps& caps,
                                   std::uint64_t seed, int trials, int parallelism);

struct RunConfig {
    std::string suite = "all";
    int trials = 100;
    DimCaps caps;
    std::uint64_t seed = 0;
    double tol = 1e-9;
    int parallelism = 1;
    std::map<std::string, double> budget_overrides;
    std::string out_path;
};

struct SuiteEntry {
    std::string name;
    int trials = 0;
    double budget = 0.0;
    double sup_ratio = 0.0;
    double witness_t = 0.0;
    std::string witness_digest;
    int violations = 0;
    std::vector<std::string> violation_digests;  // first few, for reproduction
    bool pass = true;
    std::map<std::string, double> extra;
    std::vector<std::pair<double, double>> curve;
};

struct SuiteReport {
    std::string suite;
    std::uint64_t seed = 0;
    int trials = 0;
    bool pass = true;
    std::vector<SuiteEntry> entries;

    std::string to_json(bool with_timestamp = true) const;
    std::string curves_csv(const std::string& entry_name) const;
};

std::vector<std::string> known_suites();

SuiteReport run_suite(const RunConfig& config);

}  // namespace ncdist
