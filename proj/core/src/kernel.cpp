#include "mw/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace mw {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kEulerE = 2.718281828459045235360287471352662498;
}  // namespace

double log_add_exp(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double hi = std::max(a, b), lo = std::min(a, b);
    return hi + std::log1p(std::exp(lo - hi));
}

double log_sub_exp(double a, double b) {
    if (b == kNegInf) return a;
    if (a <= b) return kNegInf;
    return b + std::log(std::expm1(a - b));
}

// ---------------------------------------------------------------------------
// MemoryKernel

MemoryKernel MemoryKernel::mu1(double alpha, double beta) {
    if (!(alpha > 0.0)) throw std::invalid_argument("mu1: alpha must be > 0");
    if (!(beta >= 0.0)) throw std::invalid_argument("mu1: beta must be >= 0");
    MemoryKernel k;
    k.family_ = Family::Mu1;
    k.alpha_ = alpha;
    k.beta_ = beta;
    return k;
}

MemoryKernel MemoryKernel::mu2(double gamma, double delta) {
    if (!(gamma > 0.0)) throw std::invalid_argument("mu2: gamma must be > 0");
    if (!(delta > 0.0 && delta <= 0.5))
        throw std::invalid_argument("mu2: delta must lie in (0, 1/2]");
    MemoryKernel k;
    k.family_ = Family::Mu2;
    k.gamma_ = gamma;
    k.delta_ = delta;
    return k;
}

double MemoryKernel::value(double x) const {
    if (family_ == Family::Mu1) {
        if (x < 1.0) return 0.0;
        const double lx = std::log(x);
        return alpha_ / x * std::pow(lx, alpha_ - 1.0) *
               std::exp(beta_ * std::pow(lx, alpha_));
    }
    if (x <= 0.0) return x == 0.0 && delta_ == 1.0 ? gamma_ : 0.0;
    return gamma_ * delta_ * std::pow(x, delta_ - 1.0) *
           std::exp(gamma_ * std::pow(x, delta_));
}

double MemoryKernel::value_discrete(std::int64_t k) const {
    const double lv = log_value_discrete(k);
    return lv == kNegInf ? 0.0 : std::exp(lv);
}

double MemoryKernel::log_value_discrete(std::int64_t k) const {
    if (family_ == Family::Mu1) {
        if (k < 1) return kNegInf;
        if (k == 1) {
            if (alpha_ > 1.0) return kNegInf;           // log(1)^(alpha-1) = 0
            if (alpha_ == 1.0) return 0.0;              // mu1(1) = 1
            return std::log(alpha_) - 1.0 + beta_;      // clamp: mu1 at x = e
        }
        const double lx = std::log(static_cast<double>(k));
        return std::log(alpha_) - lx + (alpha_ - 1.0) * std::log(lx) +
               beta_ * std::pow(lx, alpha_);
    }
    if (k < 1) return kNegInf;  // mu2(0) taken as 0, mirroring mu1(0)=0
    const double xd = std::pow(static_cast<double>(k), delta_);
    return std::log(gamma_ * delta_) +
           (delta_ - 1.0) * std::log(static_cast<double>(k)) + gamma_ * xd;
}

double MemoryKernel::cumulative(double x) const {
    if (x <= 0.0) return 0.0;
    if (family_ == Family::Mu1) {
        const double la = std::pow(std::log(std::max(x, 1.0)), alpha_);
        if (beta_ == 0.0) return la;
        return std::expm1(beta_ * la) / beta_;
    }
    return std::expm1(gamma_ * std::pow(x, delta_));
}

double MemoryKernel::log_cumulative(double x) const {
    if (x <= 0.0) return kNegInf;
    if (family_ == Family::Mu1) {
        const double la = std::pow(std::log(std::max(x, 1.0)), alpha_);
        if (la == 0.0) return kNegInf;
        if (beta_ == 0.0) return std::log(la);
        // log(expm1(beta*la)/beta)
        const double z = beta_ * la;
        if (z > 700.0) return z - std::log(beta_);
        return std::log(std::expm1(z)) - std::log(beta_);
    }
    const double z = gamma_ * std::pow(x, delta_);
    if (z == 0.0) return kNegInf;
    if (z > 700.0) return z;
    return std::log(std::expm1(z));
}

double MemoryKernel::cumulative_inverse(double y) const {
    if (!(y >= 0.0)) throw std::invalid_argument("cumulative_inverse: y < 0");
    if (y == 0.0) return support_left();
    return cumulative_inverse_log(std::log(y));
}

double MemoryKernel::cumulative_inverse_log(double log_y) const {
    if (log_y == kNegInf) return support_left();
    if (family_ == Family::Mu1) {
        // beta>0: log(x)^alpha = log1p(beta y)/beta; beta=0: log(x)^alpha = y.
        double la;
        if (beta_ == 0.0) {
            la = std::exp(log_y);
        } else if (log_y > 700.0) {
            la = (log_y + std::log(beta_)) / beta_;
        } else {
            la = std::log1p(beta_ * std::exp(log_y)) / beta_;
        }
        return std::exp(std::pow(la, 1.0 / alpha_));
    }
    // gamma x^delta = log1p(y)
    double z;
    if (log_y > 700.0) {
        z = log_y;
    } else {
        z = std::log1p(std::exp(log_y));
    }
    return std::pow(z / gamma_, 1.0 / delta_);
}

double MemoryKernel::scaling(double x) const {
    if (family_ == Family::Mu2) return gamma_ * std::pow(x, delta_);
    if (beta_ != 0.0) return std::pow(std::log(x), alpha_);
    if (x <= kEulerE)
        throw std::domain_error("scaling: mu1 with beta=0 requires x > e");
    return alpha_ * std::log(std::log(x));
}

std::string MemoryKernel::describe() const {
    std::ostringstream os;
    if (family_ == Family::Mu1)
        os << "mu1(alpha=" << alpha_ << ", beta=" << beta_ << ")";
    else
        os << "mu2(gamma=" << gamma_ << ", delta=" << delta_ << ")";
    return os.str();
}

// ---------------------------------------------------------------------------
// RunLengthDistribution

RunLengthDistribution RunLengthDistribution::geometric(double q) {
    if (!(q > 0.0 && q < 1.0))
        throw std::invalid_argument("geometric: q must lie in (0,1)");
    RunLengthDistribution d;
    d.family_ = Family::Geometric;
    d.q_ = q;
    d.m1_ = 1.0 / q;
    d.m2_ = (2.0 - q) / (q * q);
    d.m3_ = (6.0 - 6.0 * q + q * q) / (q * q * q);
    return d;
}

RunLengthDistribution RunLengthDistribution::deterministic(double c) {
    if (!(c > 0.0)) throw std::invalid_argument("deterministic: c must be > 0");
    RunLengthDistribution d;
    d.family_ = Family::Deterministic;
    d.c_ = c;
    d.m1_ = c;
    d.m2_ = c * c;
    d.m3_ = c * c * c;
    return d;
}

RunLengthDistribution RunLengthDistribution::discrete_uniform(std::int64_t k) {
    if (k < 1) throw std::invalid_argument("discrete_uniform: k must be >= 1");
    RunLengthDistribution d;
    d.family_ = Family::DiscreteUniform;
    d.k_ = k;
    const double kd = static_cast<double>(k);
    d.m1_ = (kd + 1.0) / 2.0;
    d.m2_ = (kd + 1.0) * (2.0 * kd + 1.0) / 6.0;
    d.m3_ = kd * (kd + 1.0) * (kd + 1.0) / 4.0;
    return d;
}

RunLengthDistribution RunLengthDistribution::exponential(double rate) {
    if (!(rate > 0.0)) throw std::invalid_argument("exponential: rate must be > 0");
    RunLengthDistribution d;
    d.family_ = Family::Exponential;
    d.rate_ = rate;
    d.m1_ = 1.0 / rate;
    d.m2_ = 2.0 / (rate * rate);
    d.m3_ = 6.0 / (rate * rate * rate);
    return d;
}

bool RunLengthDistribution::integer_valued() const {
    switch (family_) {
        case Family::Geometric:
        case Family::DiscreteUniform:
            return true;
        case Family::Deterministic:
            return c_ == std::floor(c_);
        case Family::Exponential:
            return false;
    }
    return false;
}

void RunLengthDistribution::check_axis(TimeAxis axis) const {
    if (axis == TimeAxis::Discrete && !integer_valued())
        throw std::invalid_argument("run-length law " + describe() +
                                    " is not integer-valued; discrete axis "
                                    "requires integer run lengths");
}

double RunLengthDistribution::sample(Rng& rng) const {
    switch (family_) {
        case Family::Geometric:
            return static_cast<double>(rng.geometric(q_));
        case Family::Deterministic:
            return c_;
        case Family::DiscreteUniform:
            return static_cast<double>(1 + rng.below(static_cast<std::uint64_t>(k_)));
        case Family::Exponential:
            return rng.exponential() / rate_;
    }
    return c_;
}

std::string RunLengthDistribution::describe() const {
    std::ostringstream os;
    switch (family_) {
        case Family::Geometric: os << "geometric(q=" << q_ << ")"; break;
        case Family::Deterministic: os << "deterministic(c=" << c_ << ")"; break;
        case Family::DiscreteUniform: os << "discrete_uniform(1.." << k_ << ")"; break;
        case Family::Exponential: os << "exponential(rate=" << rate_ << ")"; break;
    }
    return os.str();
}

MomentSummary moment_summary(const RunLengthDistribution& dist,
                             const MemoryKernel& kernel) {
    MomentSummary m;
    const double el = dist.mean();
    m.kappa2 = dist.moment2() / (2.0 * el);
    m.kappa3 = dist.moment3() / (3.0 * el);
    if (kernel.family() == MemoryKernel::Family::Mu2) {
        const double scale = std::pow(el, 1.0 - kernel.delta());
        m.hat_kappa2 = dist.moment2() / (2.0 * scale);
        m.hat_kappa3 = dist.moment3() / (3.0 * scale);
    } else {
        m.hat_kappa2 = m.kappa2;
        m.hat_kappa3 = m.kappa3;
    }
    return m;
}

// ---------------------------------------------------------------------------
// KernelContext

KernelContext::KernelContext(MemoryKernel kernel, TimeAxis axis)
    : kernel_(kernel), axis_(axis) {
    if (axis_ == TimeAxis::Discrete) log_table_.push_back(kNegInf);  // mubar(0)=0
}

void KernelContext::ensure_table(std::int64_t horizon) {
    if (axis_ != TimeAxis::Discrete) return;
    const auto need = static_cast<std::size_t>(horizon) + 2;
    if (log_table_.size() >= need) return;
    log_table_.reserve(need);
    while (log_table_.size() < need) {
        const auto k = static_cast<std::int64_t>(log_table_.size()) - 1;
        log_table_.push_back(
            log_add_exp(log_table_.back(), kernel_.log_value_discrete(k)));
    }
}

double KernelContext::cumulative(double x) const {
    if (axis_ == TimeAxis::Continuous) return kernel_.cumulative(x);
    const double lc = log_cumulative(x);
    return lc == kNegInf ? 0.0 : std::exp(lc);
}

double KernelContext::log_cumulative(double x) const {
    if (axis_ == TimeAxis::Continuous) return kernel_.log_cumulative(x);
    if (x <= 0.0) return kNegInf;
    const auto xi = static_cast<std::int64_t>(x);
    const auto idx = static_cast<std::size_t>(xi);
    if (idx >= log_table_.size())
        const_cast<KernelContext*>(this)->ensure_table(xi);
    return log_table_[idx];
}

double KernelContext::cumulative_inverse(double y) const {
    if (!(y >= 0.0)) throw std::invalid_argument("cumulative_inverse: y < 0");
    if (axis_ == TimeAxis::Continuous) return kernel_.cumulative_inverse(y);
    if (y == 0.0) return 0.0;
    const double ly = std::log(y);
    // Smallest integer x with mubar(x) >= y; grow the table until covered.
    std::int64_t hi = static_cast<std::int64_t>(log_table_.size()) - 1;
    while (log_table_.back() < ly) {
        hi = 2 * std::max<std::int64_t>(hi, 1);
        const_cast<KernelContext*>(this)->ensure_table(hi);
        if (hi > (1LL << 40))
            throw std::invalid_argument("cumulative_inverse: y unreachable");
    }
    const auto it = std::lower_bound(log_table_.begin(), log_table_.end(), ly);
    return static_cast<double>(it - log_table_.begin());
}

double KernelContext::run_weight(double t_prev, double len) const {
    const double lw = log_run_weight(t_prev, len);
    return lw == kNegInf ? 0.0 : std::exp(lw);
}

double KernelContext::log_run_weight(double t_prev, double len) const {
    if (!(t_prev >= 0.0) || !(len > 0.0))
        throw std::invalid_argument("run_weight: need t_prev >= 0, len > 0");
    return log_sub_exp(log_cumulative(t_prev + len), log_cumulative(t_prev));
}

double KernelContext::sample_within_run(double t_prev, double len,
                                        Rng& rng) const {
    return sample_within_run_u(t_prev, len, rng.uniform_pos());
}

double KernelContext::sample_within_run_u(double t_prev, double len,
                                          double u) const {
    const double log_lo = log_cumulative(t_prev);
    const double log_w = log_sub_exp(log_cumulative(t_prev + len), log_lo);
    if (log_w == kNegInf)
        throw std::invalid_argument("sample_within_run: run carries no mass");
    // Target cumulative value: mubar(t_prev) + u * W, in log space.
    const double log_target = log_add_exp(log_lo, std::log(u) + log_w);
    if (axis_ == TimeAxis::Continuous) {
        const double x = kernel_.cumulative_inverse_log(log_target);
        return std::min(std::max(x - t_prev, 0.0), std::nextafter(len, 0.0));
    }
    // Discrete: smallest offset f in [0, len) with
    // mubar(t_prev + f + 1) - mubar(t_prev) >= u W.
    const auto base = static_cast<std::int64_t>(t_prev);
    const auto l = static_cast<std::int64_t>(len);
    std::int64_t lo = 0, hi = l - 1;
    while (lo < hi) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        if (log_table_[static_cast<std::size_t>(base + mid + 1)] >= log_target)
            hi = mid;
        else
            lo = mid + 1;
    }
    return static_cast<double>(lo);
}

double KernelContext::sample_relocation_time(double t_now, Rng& rng) const {
    return sample_relocation_time_u(t_now, rng.uniform_pos());
}

double KernelContext::sample_relocation_time_u(double t_now, double u) const {
    const double log_total = log_cumulative(t_now);
    if (log_total == kNegInf)
        throw std::invalid_argument("sample_relocation_time: no kernel mass");
    const double log_target = std::log(u) + log_total;
    if (axis_ == TimeAxis::Continuous)
        return std::min(kernel_.cumulative_inverse_log(log_target),
                        std::nextafter(t_now, 0.0));
    // Discrete: R = k with probability mu(k)/mubar(t_now), k in [0, t_now).
    const auto t = static_cast<std::size_t>(t_now);
    const auto first = log_table_.begin();
    const auto it = std::lower_bound(first + 1, first + t + 1, log_target);
    return static_cast<double>(it - first) - 1.0;
}

RunMomentDiagnostic KernelContext::run_moment_diagnostic(double t_prev,
                                                         double len,
                                                         int ell) const {
    if (ell < 2) throw std::invalid_argument("run_moment_diagnostic: ell >= 2");
    const double mu_t = axis_ == TimeAxis::Discrete
                            ? kernel_.value_discrete(static_cast<std::int64_t>(t_prev))
                            : kernel_.value(t_prev);
    const double log_mu_t =
        axis_ == TimeAxis::Discrete
            ? kernel_.log_value_discrete(static_cast<std::int64_t>(t_prev))
            : std::log(mu_t);

    // r = int_0^len u^(ell-1) mu(t_prev+u)/mu(t_prev) du  (sum on the discrete
    // axis), evaluated against the ratio so huge kernel values stay finite.
    double r = 0.0;
    if (axis_ == TimeAxis::Discrete) {
        const auto l = static_cast<std::int64_t>(len);
        const auto base = static_cast<std::int64_t>(t_prev);
        for (std::int64_t j = 0; j < l; ++j) {
            const double ratio =
                std::exp(kernel_.log_value_discrete(base + j) - log_mu_t);
            r += std::pow(static_cast<double>(j), ell - 1) * ratio;
        }
    } else {
        // Adaptive Simpson on f(u) = u^(ell-1) exp(log mu(t+u) - log mu(t)).
        const auto f = [&](double u) {
            const double lv = std::log(kernel_.value(t_prev + u));
            return std::pow(u, ell - 1) * std::exp(lv - log_mu_t);
        };
        struct Simpson {
            static double run(const std::function<double(double)>& g, double a,
                              double b, double fa, double fm, double fb,
                              double eps, int depth) {
                const double m = 0.5 * (a + b);
                const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
                const double flm = g(lm), frm = g(rm);
                const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
                const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
                const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
                if (depth <= 0 || std::abs(left + right - whole) <
                                      15.0 * eps * (1.0 + std::abs(whole)))
                    return left + right + (left + right - whole) / 15.0;
                return run(g, a, m, fa, flm, fm, eps * 0.5, depth - 1) +
                       run(g, m, b, fm, frm, fb, eps * 0.5, depth - 1);
            }
        };
        const std::function<double(double)> g = f;
        const double mid = 0.5 * len;
        r = Simpson::run(g, 0.0, len, f(0.0), f(mid), f(len), 1e-12, 48);
    }

    RunMomentDiagnostic d;
    d.lhs = mu_t * r;
    d.approx = mu_t * std::pow(len, ell) / ell;
    const double envelope =
        kernel_.family() == MemoryKernel::Family::Mu1
            ? std::pow(len, ell + 1) *
                  std::pow(std::log(t_prev), std::max(kernel_.alpha(), 1.0) - 1.0) /
                  t_prev
            : std::pow(len, ell + 1) / std::pow(t_prev, 1.0 - kernel_.delta());
    d.bound = mu_t * envelope;
    return d;
}

}  // namespace mw
