#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "mw/rng.hpp"

namespace mw {

enum class TimeAxis { Discrete, Continuous };

inline const char* to_string(TimeAxis a) {
    return a == TimeAxis::Discrete ? "discrete" : "continuous";
}

// log(e^a + e^b) and log(e^a - e^b), stable.
double log_add_exp(double a, double b);
double log_sub_exp(double a, double b);  // requires a >= b

// The two memory-kernel families.
//
//   mu1(x) = (alpha/x) log(x)^(alpha-1) exp(beta log(x)^alpha),  alpha>0, beta>=0
//   mu2(x) = gamma delta x^(delta-1) exp(gamma x^delta),         gamma>0, 0<delta<=1/2
//
// mu1 is zero on [0,1) (extending mu1(0)=0). On the discrete axis the k=1
// value of mu1 with alpha<1 diverges in the literal formula and is clamped
// to the continuous value at x=e.
class MemoryKernel {
public:
    enum class Family { Mu1, Mu2 };

    static MemoryKernel mu1(double alpha, double beta);
    static MemoryKernel mu2(double gamma, double delta);

    Family family() const { return family_; }
    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    double gamma() const { return gamma_; }
    double delta() const { return delta_; }

    // mu(x) on the continuous axis; total on [0, inf).
    double value(double x) const;
    // mu(k) on the discrete axis (with the k=1 clamp for mu1, alpha<1).
    double value_discrete(std::int64_t k) const;
    double log_value_discrete(std::int64_t k) const;  // -inf where mu(k)=0

    // Closed-form continuous cumulative mubar(x) = int_0^x mu, its log, and
    // its inverse. The log forms stay finite where mubar overflows a double.
    double cumulative(double x) const;
    double log_cumulative(double x) const;
    double cumulative_inverse(double y) const;
    double cumulative_inverse_log(double log_y) const;

    // Scaling function s(x). Throws for mu1 with beta=0 when x <= e.
    double scaling(double x) const;

    // Left edge of the support of mu (1 for mu1, 0 for mu2).
    double support_left() const { return family_ == Family::Mu1 ? 1.0 : 0.0; }

    std::string describe() const;

private:
    MemoryKernel() = default;
    Family family_ = Family::Mu1;
    double alpha_ = 1.0, beta_ = 1.0;   // mu1
    double gamma_ = 1.0, delta_ = 0.5;  // mu2
};

// Run-length laws. All listed families have E L^8 < infinity and P(L=0)=0.
class RunLengthDistribution {
public:
    enum class Family { Geometric, Deterministic, DiscreteUniform, Exponential };

    static RunLengthDistribution geometric(double q);
    static RunLengthDistribution deterministic(double c);
    static RunLengthDistribution discrete_uniform(std::int64_t k);
    static RunLengthDistribution exponential(double rate);

    Family family() const { return family_; }
    double q() const { return q_; }
    double c() const { return c_; }
    std::int64_t k() const { return k_; }
    double rate() const { return rate_; }

    double mean() const { return m1_; }
    double moment2() const { return m2_; }
    double moment3() const { return m3_; }
    bool moment8_finite() const { return true; }

    bool integer_valued() const;
    // Throws if the law cannot live on the axis (Exponential on the discrete
    // axis, non-integer Deterministic on the discrete axis).
    void check_axis(TimeAxis axis) const;

    double sample(Rng& rng) const;

    std::string describe() const;

private:
    RunLengthDistribution() = default;
    Family family_ = Family::Deterministic;
    double q_ = 0.5, c_ = 1.0, rate_ = 1.0;
    std::int64_t k_ = 1;
    double m1_ = 1.0, m2_ = 1.0, m3_ = 1.0;
};

// kappa_i = E L^i / (i E L); hat versions divide by (E L)^(1-delta) for mu2.
struct MomentSummary {
    double kappa2 = 0.0;
    double kappa3 = 0.0;
    double hat_kappa2 = 0.0;
    double hat_kappa3 = 0.0;
};

MomentSummary moment_summary(const RunLengthDistribution& dist,
                             const MemoryKernel& kernel);

struct RunMomentDiagnostic {
    double lhs = 0.0;     // W * E[F^(ell-1)]
    double approx = 0.0;  // mu(t_prev) * len^ell / ell
    double bound = 0.0;   // mu(t_prev) * error envelope (kernel-dependent)
};

// Axis-aware kernel operations. On the discrete axis an incrementally grown
// prefix table of log-cumulative values backs all queries; call
// ensure_table(horizon) before sharing a context across threads, after which
// every operation is read-only.
class KernelContext {
public:
    KernelContext(MemoryKernel kernel, TimeAxis axis);

    const MemoryKernel& kernel() const { return kernel_; }
    TimeAxis axis() const { return axis_; }

    void ensure_table(std::int64_t horizon);

    double cumulative(double x) const;
    double log_cumulative(double x) const;
    // Continuous axis: the exact inverse of the closed form. Discrete axis:
    // smallest integer x with mubar(x) >= y.
    double cumulative_inverse(double y) const;

    // mubar(t_prev + len) - mubar(t_prev); may overflow to +inf for mu2 at
    // extreme arguments (use log_run_weight there).
    double run_weight(double t_prev, double len) const;
    double log_run_weight(double t_prev, double len) const;

    // Offset F in [0, len) with P(F <= x) proportional to the kernel mass of
    // [t_prev, t_prev+x). Throws if the run carries no mass.
    double sample_within_run(double t_prev, double len, Rng& rng) const;
    double sample_within_run_u(double t_prev, double len, double u) const;

    // Relocation target R in [0, t_now) with P(R <= x) = mubar(x)/mubar(t_now).
    // Throws if mubar(t_now) = 0.
    double sample_relocation_time(double t_now, Rng& rng) const;
    double sample_relocation_time_u(double t_now, double u) const;

    RunMomentDiagnostic run_moment_diagnostic(double t_prev, double len,
                                              int ell) const;

    double scaling(double x) const { return kernel_.scaling(x); }

    // Discrete-axis log-cumulative prefix: entry x is log mubar(x).
    const std::vector<double>& log_table() const { return log_table_; }

private:
    MemoryKernel kernel_;
    TimeAxis axis_;
    std::vector<double> log_table_;  // discrete only
};

}  // namespace mw
