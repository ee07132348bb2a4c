#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "lqgduet/core.hpp"

namespace lqgduet {

struct LowerConfig {
    double theta = 2.5;       // geometric slicing ratio
    bool log_base2 = true;    // false evaluates mutual information in nats (diagnostics)
    int extra_stages = 3;     // k2 - k1 - 1 ranges over [0, s + extra_stages]
    double rel_gap = 1e-3;    // branch-and-bound stopping gap
    long max_evals = 20000;   // envelope evaluations per minimization
    double inf_margin = 1e-9; // relative margin for declaring an unbounded branch
};

struct SliceParams {
    int k1 = 1;
    int k2 = 2;
    int k = 2;
    double sigma_v2_prime_sq = 0.0;
    double alpha = 1.0;
    double Sigma = 0.0;
};

double info_mmse(double a, double sigmav1_sq, double sigmav2_sq, int k1, int k);

// Upper end of the admissible Sigma range for a given k1.
double sigma_cap(const ProblemParams& p, int k1);

// Limit of sigma_cap as k1 grows.
double sigma_cap_limit(const ProblemParams& p);

bool in_slice_set(const ProblemParams& p, const SliceParams& sp);

double power_expand(double a, double b, const std::vector<double>& weighted_powers);

double mutual_info_Ik(double a, double sigma0_sq, double sigmav_sq, int k, double w, double P,
                      bool log_base2 = true);
double mutual_info_Ik_prime(double a, double sigma0_sq, double sigmav_sq, int k, double w, double P,
                            double sigmav_last_sq, bool log_base2 = true);
double mutual_info_Ik_doubleprime(double a, double sigma0_sq, double sigmav_sq, int k, double w,
                                  double P, double sigmav_last_sq, bool log_base2 = true);

double large_deviation_c(double sigmav2_sq, double sigmav2_prime_sq);

// The (1 - alpha) branch is omitted when k = k1 + 1, where its Sigma term and the trailing 1 count
// the same disturbance.
double dl1(const ProblemParams& p, const SliceParams& sp, double P1, double P2, const LowerConfig& cfg = {});

struct RadnerMin {
    double value = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
};

// min over |c_i| <= bound_i of (|a| - c1 - c2)^2 Sigma + c1^2 sv1 + c2^2 sv2
RadnerMin radner_quadratic_min(double a, double Sigma, double sv1, double sv2, double bound1,
                               double bound2);

double dl2(const ProblemParams& p, int k1, int k, double Sigma, double P1, double P2,
           const LowerConfig& cfg = {});
double dl3(const ProblemParams& p, int k1);
double dl3_sup(const ProblemParams& p);
double dl4(const ProblemParams& p, int k, double P1, double P2, const LowerConfig& cfg = {});

enum class Envelope { L1, L2, L3, L4 };
std::string envelope_name(Envelope e);

struct EnvelopeValue {
    double value = 1.0;
    Envelope which = Envelope::L3;
};

struct LowerResult {
    double cost = 0.0;        // certified lower bound on the weighted cost
    double estimate = kInf;   // best evaluated objective value
    double P1 = 0.0;          // power pair attaining the estimate
    double P2 = 0.0;
    Envelope which = Envelope::L3;
    long evals = 0;
};

// Pointwise envelope over the candidate slicing parameters, minimized over power pairs.
class LowerBound {
public:
    explicit LowerBound(const ProblemParams& p, const LowerConfig& cfg = {});

    EnvelopeValue envelope(double P1, double P2);
    LowerResult minimize(double q, double r1, double r2);

    const ProblemParams& params() const { return p_; }

private:
    struct Key {
        double x, y;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const;
    };

    EnvelopeValue compute(double P1, double P2) const;

    ProblemParams p_;
    LowerConfig cfg_;
    int s_ = 0;
    double l3_ = 1.0;
    std::vector<double> sigmas_;
    std::unordered_map<Key, EnvelopeValue, KeyHash> cache_;
};

double lower_weighted_cost(const ProblemParams& p, const LowerConfig& cfg = {});

}  // namespace lqgduet
