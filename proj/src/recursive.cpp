#include "ranknorm/recursive.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "ranknorm/errors.hpp"
#include "ranknorm/gauss.hpp"

namespace ranknorm {

namespace {

constexpr double kNegVarianceTol = 1e-8;

// Accumulates sum of value_k * exp(log_scale_k) terms without leaving the
// representable range; the running total is kept as sum * exp(log_scale).
class ScaledSum {
public:
    void add(double value, double log_scale) {
        if (value == 0.0) return;
        if (sum_ == 0.0) {
            sum_ = value;
            log_scale_ = log_scale;
            return;
        }
        if (log_scale > log_scale_) {
            sum_ = sum_ * std::exp(log_scale_ - log_scale) + value;
            log_scale_ = log_scale;
        } else {
            sum_ += value * std::exp(log_scale - log_scale_);
        }
    }

    double sum_part() const { return sum_; }

    double log() const { return std::log(sum_) + log_scale_; }

    static double ratio(const ScaledSum& num, const ScaledSum& den) {
        return (num.sum_ / den.sum_) * std::exp(num.log_scale_ - den.log_scale_);
    }

private:
    double sum_ = 0.0;
    double log_scale_ = -std::numeric_limits<double>::infinity();
};

// dst(x_k) = integral from the grid start to x_k of src(t)*phi(t) dt,
// optionally with an extra pointwise factor g(t). Cumulative trapezoid;
// src and dst may alias.
void cumulative_step(const double* src, const double* phi, const double* g, double dx,
                     std::size_t k, double* dst) {
    double acc = 0.0;
    if (g == nullptr) {
        double prev = src[0] * phi[0];
        dst[0] = 0.0;
        for (std::size_t i = 1; i < k; ++i) {
            const double cur = src[i] * phi[i];
            acc += 0.5 * dx * (prev + cur);
            dst[i] = acc;
            prev = cur;
        }
    } else {
        double prev = src[0] * g[0] * phi[0];
        dst[0] = 0.0;
        for (std::size_t i = 1; i < k; ++i) {
            const double cur = src[i] * g[i] * phi[i];
            acc += 0.5 * dx * (prev + cur);
            dst[i] = acc;
            prev = cur;
        }
    }
}

// Full-range trapezoid of src(t)*phi(t)*[g(t)].
double final_integral(const double* src, const double* phi, const double* g, double dx,
                      std::size_t k) {
    double sum = 0.0;
    if (g == nullptr) {
        sum += 0.5 * (src[0] * phi[0] + src[k - 1] * phi[k - 1]);
        for (std::size_t i = 1; i + 1 < k; ++i) sum += src[i] * phi[i];
    } else {
        sum += 0.5 * (src[0] * g[0] * phi[0] + src[k - 1] * g[k - 1] * phi[k - 1]);
        for (std::size_t i = 1; i + 1 < k; ++i) sum += src[i] * g[i] * phi[i];
    }
    return sum * dx;
}

struct EngineResult {
    ScaledSum b;                       // normalizing probability B
    std::vector<ScaledSum> a_mean;     // numerators with g_l(x) = x
    std::vector<ScaledSum> a_second;   // numerators with g_l(x) = x^2
};

EngineResult run_engine(const UniformCorrelationModel& model, const QuadratureSpec& spec,
                        bool want_moments, bool rescale) {
    spec.validate();
    if (model.rho == 1.0) {
        throw DegenerateModelError(
            "conditional moments: rho == 1 leaves every component with zero conditional "
            "variance; the per-component densities are degenerate");
    }

    const std::size_t n = model.n();
    const std::size_t nx = static_cast<std::size_t>(spec.x_nodes);
    const double sqrt_rho = std::sqrt(model.rho);
    const double sqrt_1mrho = std::sqrt(1.0 - model.rho);

    std::vector<double> cond_sd(n), inv_sd(n), pdf_norm(n);
    double max_sd = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        cond_sd[i] = model.sigma[i] * sqrt_1mrho;
        inv_sd[i] = 1.0 / cond_sd[i];
        pdf_norm[i] = inv_sd[i] / std::numbers::sqrt2 / std::sqrt(std::numbers::pi);
        max_sd = std::max(max_sd, cond_sd[i]);
    }

    EngineResult result;
    if (want_moments) {
        result.a_mean.resize(n);
        result.a_second.resize(n);
    }

    // Reused workspaces.
    std::vector<double> grid(nx), grid_sq(nx);
    std::vector<std::vector<double>> phi(n, std::vector<double>(nx));
    std::vector<RecursionState> blevel(n);
    for (auto& s : blevel) s.values.resize(nx);
    RecursionState hmean, hsecond;
    hmean.values.resize(nx);
    hsecond.values.resize(nx);

    const double dm = 2.0 * spec.m_halfwidth / (spec.m_nodes - 1);

    for (int j = 0; j < spec.m_nodes; ++j) {
        const double m = -spec.m_halfwidth + j * dm;
        // Simpson coefficients 1,4,2,...,2,4,1 (m_nodes is odd).
        const double simpson = (j == 0 || j == spec.m_nodes - 1) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
        const double outer_weight = simpson * (dm / 3.0) * gauss::std_normal_pdf(m);

        // Conditional means given M = m and the shared inner grid around them.
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            const double loc = model.mu[i] + model.sigma[i] * sqrt_rho * m;
            lo = std::min(lo, loc);
            hi = std::max(hi, loc);
        }
        lo -= spec.x_padding * max_sd;
        hi += spec.x_padding * max_sd;
        const double dx = (hi - lo) / (nx - 1);

        for (std::size_t k = 0; k < nx; ++k) {
            grid[k] = lo + static_cast<double>(k) * dx;
            grid_sq[k] = grid[k] * grid[k];
        }
        for (std::size_t i = 0; i < n; ++i) {
            const double loc = model.mu[i] + model.sigma[i] * sqrt_rho * m;
            double* row = phi[i].data();
            for (std::size_t k = 0; k < nx; ++k) {
                const double z = (grid[k] - loc) * inv_sd[i];
                row[k] = pdf_norm[i] * std::exp(-0.5 * z * z);
            }
        }

        // b recursion: blevel[i] holds b_i (b_0 = 1), each level rescaled.
        std::fill(blevel[0].values.begin(), blevel[0].values.end(), 1.0);
        blevel[0].log_scale = 0.0;
        for (std::size_t i = 1; i < n; ++i) {
            cumulative_step(blevel[i - 1].values.data(), phi[i - 1].data(), nullptr, dx, nx,
                            blevel[i].values.data());
            blevel[i].log_scale = blevel[i - 1].log_scale;
            if (rescale) blevel[i].rescale();
        }
        result.b.add(outer_weight * final_integral(blevel[n - 1].values.data(), phi[n - 1].data(),
                                                   nullptr, dx, nx),
                     blevel[n - 1].log_scale);

        if (!want_moments) continue;

        // h recursions: identical to b up to level l-1, then one step carries
        // the g_l factor, after which the chain continues plain.
        for (std::size_t lc = 0; lc < n; ++lc) {
            if (lc == n - 1) {
                // g_n sits in the final integral.
                result.a_mean[lc].add(
                    outer_weight * final_integral(blevel[n - 1].values.data(), phi[n - 1].data(),
                                                  grid.data(), dx, nx),
                    blevel[n - 1].log_scale);
                result.a_second[lc].add(
                    outer_weight * final_integral(blevel[n - 1].values.data(), phi[n - 1].data(),
                                                  grid_sq.data(), dx, nx),
                    blevel[n - 1].log_scale);
                continue;
            }

            cumulative_step(blevel[lc].values.data(), phi[lc].data(), grid.data(), dx, nx,
                            hmean.values.data());
            hmean.log_scale = blevel[lc].log_scale;
            cumulative_step(blevel[lc].values.data(), phi[lc].data(), grid_sq.data(), dx, nx,
                            hsecond.values.data());
            hsecond.log_scale = blevel[lc].log_scale;
            if (rescale) {
                hmean.rescale();
                hsecond.rescale();
            }
            // Remaining plain steps build h_{l+1}..h_{n-1}; the density of
            // component n enters only through the final integral.
            for (std::size_t i = lc + 1; i + 1 < n; ++i) {
                cumulative_step(hmean.values.data(), phi[i].data(), nullptr, dx, nx,
                                hmean.values.data());
                cumulative_step(hsecond.values.data(), phi[i].data(), nullptr, dx, nx,
                                hsecond.values.data());
                if (rescale) {
                    hmean.rescale();
                    hsecond.rescale();
                }
            }
            result.a_mean[lc].add(outer_weight * final_integral(hmean.values.data(),
                                                                phi[n - 1].data(), nullptr, dx, nx),
                                  hmean.log_scale);
            result.a_second[lc].add(
                outer_weight * final_integral(hsecond.values.data(), phi[n - 1].data(), nullptr, dx,
                                              nx),
                hsecond.log_scale);
        }
    }

    if (!(result.b.sum_part() > 0.0)) {
        throw NumericalFailureError("ranking probability integrated to a nonpositive value; "
                                    "the quadrature grid cannot represent this model");
    }
    return result;
}

}  // namespace

void QuadratureSpec::validate() const {
    if (m_nodes < 21) throw std::invalid_argument("QuadratureSpec: m_nodes must be >= 21");
    if (m_nodes % 2 == 0) {
        throw std::invalid_argument("QuadratureSpec: m_nodes must be odd (Simpson's rule)");
    }
    if (x_nodes < 201) throw std::invalid_argument("QuadratureSpec: x_nodes must be >= 201");
    if (!(m_halfwidth >= 6.0)) {
        throw std::invalid_argument("QuadratureSpec: m_halfwidth must be >= 6");
    }
    if (!(x_padding >= 6.0)) throw std::invalid_argument("QuadratureSpec: x_padding must be >= 6");
}

void RecursionState::rescale() {
    double amax = 0.0;
    for (double v : values) amax = std::max(amax, std::abs(v));
    if (amax == 0.0) return;               // nothing to factor out of a zero level
    if (amax >= 0.5 && amax <= 2.0) return;
    const double inv = 1.0 / amax;
    for (double& v : values) v *= inv;
    log_scale += std::log(amax);
}

double log_ranking_probability(const UniformCorrelationModel& model, const QuadratureSpec& spec) {
    return run_engine(model, spec, /*want_moments=*/false, /*rescale=*/true).b.log();
}

namespace detail {

ConditionalMoments conditional_moments_canonical(const UniformCorrelationModel& model,
                                                 const QuadratureSpec& spec, bool rescale) {
    const EngineResult r = run_engine(model, spec, /*want_moments=*/true, rescale);
    const std::size_t n = model.n();

    ConditionalMoments out;
    out.mean.resize(n);
    out.second_moment.resize(n);
    out.variance.resize(n);
    out.sd.resize(n);
    out.log_prob = r.b.log();
    for (std::size_t i = 0; i < n; ++i) {
        out.mean[i] = ScaledSum::ratio(r.a_mean[i], r.b);
        out.second_moment[i] = ScaledSum::ratio(r.a_second[i], r.b);
        double var = out.second_moment[i] - out.mean[i] * out.mean[i];
        if (var < 0.0) {
            if (var < -kNegVarianceTol) {
                throw NumericalFailureError(
                    "conditional variance of component " + std::to_string(i + 1) +
                    " computed as " + std::to_string(var) +
                    "; quadrature grid too coarse for this model");
            }
            var = 0.0;
        }
        out.variance[i] = var;
        out.sd[i] = std::sqrt(var);
    }
    return out;
}

}  // namespace detail

ConditionalMoments conditional_moments(const UniformCorrelationModel& model,
                                       const Ranking& ranking, const QuadratureSpec& spec) {
    const UniformCorrelationModel canonical = apply_ranking(model, ranking);
    const ConditionalMoments cm =
        detail::conditional_moments_canonical(canonical, spec, /*rescale=*/true);

    // Map back: canonical slot k describes original component order[k].
    ConditionalMoments out;
    const std::size_t n = model.n();
    out.mean.resize(n);
    out.second_moment.resize(n);
    out.variance.resize(n);
    out.sd.resize(n);
    out.log_prob = cm.log_prob;
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t orig = ranking.order[k];
        out.mean[orig] = cm.mean[k];
        out.second_moment[orig] = cm.second_moment[k];
        out.variance[orig] = cm.variance[k];
        out.sd[orig] = cm.sd[k];
    }
    return out;
}

std::vector<ConditionalMoments> conditional_moments_all_n(
    const std::vector<UniformCorrelationModel>& models, const QuadratureSpec& spec) {
    std::vector<ConditionalMoments> out;
    out.reserve(models.size());
    for (const auto& model : models) {
        const std::string tag = "n=" + std::to_string(model.n()) + ": ";
        try {
            out.push_back(conditional_moments(model, Ranking::identity(model.n()), spec));
        } catch (const DegenerateModelError& e) {
            throw DegenerateModelError(tag + e.what());
        } catch (const NumericalFailureError& e) {
            throw NumericalFailureError(tag + e.what());
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument(tag + e.what());
        }
    }
    return out;
}

}  // namespace ranknorm
