#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace lqgduet {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class SeriesNonConvergence : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RawParams {
    double a = 0.0;
    double b1 = 1.0;
    double b2 = 1.0;
    double c1 = 1.0;
    double c2 = 1.0;
    double q = 1.0;
    double r1 = 0.0;
    double r2 = 0.0;
    double sigma0_sq = 0.0;
    double sigmaw_sq = 1.0;
    double sigmav1_sq = 0.0;
    double sigmav2_sq = 0.0;
};

struct ProblemParams {
    double a = 0.0;
    double q = 1.0;
    double r1 = 0.0;
    double r2 = 0.0;
    double sigma0_sq = 0.0;
    double sigmav1_sq = 0.0;
    double sigmav2_sq = 0.0;

    bool operator==(const ProblemParams&) const = default;
};

struct Regime {
    enum class Kind { WeaklyDegraded, StronglyDegraded };
    Kind kind = Kind::WeaklyDegraded;
    int s = 0;

    bool strong() const { return kind == Kind::StronglyDegraded; }
    std::string label() const;
};

// Throws InvalidArgument when the invariants of ProblemParams fail.
void validate(const ProblemParams& p);

ProblemParams normalize(const RawParams& raw);

// max(1, a^2 sigma_v1^2)
double first_noise_scale(const ProblemParams& p);

Regime classify(const ProblemParams& p);

int select_stage(const ProblemParams& p);

}  // namespace lqgduet
