#include "cohdisc/eand.hpp"

#include <atomic>
#include <cmath>
#include <thread>
#include <vector>

namespace cohdisc {

namespace {

constexpr double kPi = 3.14159265358979323846;

double s_of(double alpha0) { return std::sqrt(1.0 - std::exp(-alpha0 * alpha0)); }

// Gauss-Hermite rule for weight e^{-x^2} (duplicated scale-free helper; the
// localmodel grid bakes in the prior width, which the nested integrals here do not).
void hermite_rule(int order, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(order);
    Eigen::VectorXd sub(order - 1);
    for (int k = 1; k < order; ++k) sub[k - 1] = std::sqrt(0.5 * k);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub);
    nodes = es.eigenvalues();
    weights.resize(order);
    for (int j = 0; j < order; ++j) {
        const double v0 = es.eigenvectors()(0, j);
        weights[j] = std::sqrt(kPi) * v0 * v0;
    }
}

struct PosteriorParams {
    double m1, m2, var1, var2;
};

PosteriorParams posterior_params(Amplitude v, double mu, double r) {
    const double t = std::tanh(r);
    const double inv_mu2 = 1.0 / (mu * mu);
    const double q1 = (1.0 + t) + inv_mu2;
    const double q2 = (1.0 - t) + inv_mu2;
    return {(1.0 + t) * v.real() / q1, (1.0 - t) * v.imag() / q2, 0.5 / q1, 0.5 / q2};
}

}  // namespace

void HeterodyneSettings::validate() const {
    if (!(std::abs(r) < 20.0)) throw InvalidInput("HeterodyneSettings: |r| must be < 20");
    if (!(phi >= 0.0 && phi < kPi)) throw InvalidInput("HeterodyneSettings: phi must lie in [0, pi)");
}

void HeterodyneSettings::require_axis_aligned(const char* who) const {
    validate();
    if (phi != 0.0) {
        throw InvalidInput(std::string(who) + ": phi must be 0 (rotate the localisation "
                                              "point onto the positive real axis first)");
    }
}

double gaussian_overlap(const Eigen::Matrix2d& va, const Eigen::Vector2d& da,
                        const Eigen::Matrix2d& vb, const Eigen::Vector2d& db) {
    const Eigen::Matrix2d sum = va + vb;
    const double det = sum.determinant();
    if (!(det > 0.0)) throw NumericalError("gaussian_overlap: singular covariance sum");
    const Eigen::Vector2d delta = da - db;
    const double quad = delta.dot(sum.inverse() * delta);
    return 2.0 / std::sqrt(det) * std::exp(-quad);
}

Eigen::Matrix2d squeezed_covariance(const HeterodyneSettings& settings) {
    settings.validate();
    Eigen::Matrix2d rot;
    rot << std::cos(settings.phi), -std::sin(settings.phi), std::sin(settings.phi),
        std::cos(settings.phi);
    Eigen::Matrix2d diag = Eigen::Matrix2d::Zero();
    diag(0, 0) = std::exp(-2.0 * settings.r);
    diag(1, 1) = std::exp(2.0 * settings.r);
    return rot * diag * rot.transpose();
}

double heterodyne_pdf(Amplitude beta_bar, Amplitude alpha, long n,
                      const HeterodyneSettings& settings) {
    settings.validate();
    if (n < 1) throw InvalidInput("heterodyne_pdf: n must be >= 1");
    const Amplitude w = std::sqrt(double(n)) * alpha - beta_bar;
    const Amplitude w2 = w * w * std::exp(Amplitude(0.0, -2.0 * settings.phi));
    const double t = std::tanh(settings.r);
    return std::exp(-std::norm(w) - w2.real() * t) / (kPi * std::cosh(settings.r));
}

double local_outcome_pdf(Amplitude v, Amplitude u, const HeterodyneSettings& settings) {
    settings.validate();
    const Amplitude w = u - v;
    const Amplitude w2 = w * w * std::exp(Amplitude(0.0, -2.0 * settings.phi));
    const double t = std::tanh(settings.r);
    return std::exp(-std::norm(w) - w2.real() * t) / (kPi * std::cosh(settings.r));
}

Amplitude sample_heterodyne(Amplitude alpha, long n, const HeterodyneSettings& settings,
                            GaussianSampler& rng) {
    settings.validate();
    if (n < 1) throw InvalidInput("sample_heterodyne: n must be >= 1");
    const double t = std::tanh(settings.r);
    const double w1 = rng.normal() * std::sqrt(0.5 / (1.0 + t));
    const double w2 = rng.normal() * std::sqrt(0.5 / (1.0 - t));
    const Amplitude w = std::exp(Amplitude(0.0, settings.phi)) * Amplitude(w1, w2);
    return std::sqrt(double(n)) * alpha - w;
}

GaussianMoments local_posterior_moments(Amplitude v, double mu,
                                        const HeterodyneSettings& settings) {
    settings.require_axis_aligned("local_posterior_moments");
    if (!(mu > 0.0)) throw InvalidInput("local_posterior_moments: mu must be > 0");
    const PosteriorParams p = posterior_params(v, mu, settings.r);
    GaussianMoments out;
    out.I1 = Amplitude(p.m1, p.m2);
    out.I2 = std::norm(out.I1) + p.var1 + p.var2;
    out.I3 = out.I1 * out.I1 + Amplitude(p.var1 - p.var2, 0.0);
    out.var1 = p.var1;
    out.var2 = p.var2;
    return out;
}

double pv_pdf(Amplitude v, double mu, const HeterodyneSettings& settings) {
    settings.require_axis_aligned("pv_pdf");
    if (!(mu > 0.0)) throw InvalidInput("pv_pdf: mu must be > 0");
    const double t = std::tanh(settings.r);
    const double s1 = 0.5 * mu * mu + 0.5 / (1.0 + t);
    const double s2 = 0.5 * mu * mu + 0.5 / (1.0 - t);
    const double q = v.real() * v.real() / (2.0 * s1) + v.imag() * v.imag() / (2.0 * s2);
    return std::exp(-q) / (2.0 * kPi * std::sqrt(s1 * s2));
}

FockMatrix posterior_signal_state(Amplitude v, const LocalModel& model,
                                  const HeterodyneSettings& settings, int dim, int quad_order) {
    settings.require_axis_aligned("posterior_signal_state");
    model.validate();
    if (dim < 1) throw InvalidInput("posterior_signal_state: dim must be >= 1");
    const PosteriorParams p = posterior_params(v, model.mu, settings.r);
    Eigen::VectorXd x, w;
    hermite_rule(quad_order, x, w);
    const double rootn = std::sqrt(double(model.n));
    const double sc1 = std::sqrt(2.0 * p.var1), sc2 = std::sqrt(2.0 * p.var2);

    FockMatrix out;
    out.dims = {dim};
    out.m = Eigen::MatrixXcd::Zero(dim, dim);
    double mass = 0.0;
    for (int a = 0; a < quad_order; ++a) {
        for (int b = 0; b < quad_order; ++b) {
            const double wab = w[a] * w[b] / kPi;
            if (wab < 1e-18) continue;
            const Amplitude u(p.m1 + sc1 * x[a], p.m2 + sc2 * x[b]);
            const FockKet k = coherent_ket(u / rootn, dim);
            out.m.selfadjointView<Eigen::Lower>().rankUpdate(k.amp, wab);
            mass += wab * k.amp.squaredNorm();
        }
    }
    out.m.triangularView<Eigen::StrictlyUpper>() = out.m.adjoint();
    out.trace_deficit = std::max(0.0, 1.0 - mass);
    if (out.trace_deficit > 1e-6) {
        throw TruncationError("posterior_signal_state: dim leaves too much mass out",
                              out.trace_deficit);
    }
    return out;
}

int eand_signal_dim(const LocalModel& model, const HeterodyneSettings& settings,
                    const EandQuad& quad, double tol) {
    settings.require_axis_aligned("eand_signal_dim");
    model.validate();
    const double t = std::tanh(settings.r);
    const double xmax_v = std::sqrt(2.0 * quad.outer_order + 1.0);
    const double xmax_u = std::sqrt(2.0 * quad.inner_order + 1.0);
    const double s1 = 0.5 * model.mu * model.mu + 0.5 / (1.0 + t);
    const double s2 = 0.5 * model.mu * model.mu + 0.5 / (1.0 - t);
    // outermost outcome node, then the widest posterior spread around it
    const double vmax = std::sqrt(2.0 * std::max(s1, s2)) * xmax_v * std::sqrt(2.0);
    const double post_sd = std::sqrt(std::max(1.0 / (1.0 + t), 1.0 / (1.0 - t)));
    const double umax = vmax + post_sd * xmax_u;
    const double mean = std::pow(model.alpha0 + umax / std::sqrt(double(model.n)), 2) + 1.0;
    return std::max(8, poisson_tail_dim(mean, tol));
}

double pe_eand_finite(const LocalModel& model, const HeterodyneSettings& settings, int signal_dim,
                      const EandQuad& quad, EandReceiver receiver) {
    settings.require_axis_aligned("pe_eand_finite");
    model.validate();
    if (signal_dim < 2) throw InvalidInput("pe_eand_finite: signal_dim must be >= 2");
    const double t = std::tanh(settings.r);
    Eigen::VectorXd xv, wv;
    hermite_rule(quad.outer_order, xv, wv);
    const double s1 = 0.5 * model.mu * model.mu + 0.5 / (1.0 + t);
    const double s2 = 0.5 * model.mu * model.mu + 0.5 / (1.0 - t);
    const double sc1 = std::sqrt(2.0 * s1), sc2 = std::sqrt(2.0 * s2);

    const FockKet ref = coherent_ket(-model.alpha0, signal_dim);
    const FockMatrix ref_proj = FockMatrix::pure(ref);
    const double rootn = std::sqrt(double(model.n));

    double acc = 0.0;
    for (int i = 0; i < quad.outer_order; ++i) {
        for (int j = 0; j < quad.outer_order; ++j) {
            const double wij = wv[i] * wv[j] / kPi;
            if (wij < 1e-18) continue;
            const Amplitude v(sc1 * xv[i], sc2 * xv[j]);
            const FockMatrix rho =
                posterior_signal_state(v, model, settings, signal_dim, quad.inner_order);
            double err;
            if (receiver == EandReceiver::posterior_optimal) {
                FockMatrix diff;
                diff.dims = rho.dims;
                diff.m = ref_proj.m - rho.m;
                err = 0.5 * (1.0 - 0.5 * trace_norm(diff));
            } else {
                // plug-in: test against the coherent state at the point estimate, then
                // suffer the true posterior statistics
                const FockKet guess = coherent_ket(v / rootn, signal_dim);
                const FockMatrix proj = helstrom_projector(FockMatrix::pure(guess), ref_proj);
                err = 0.5 * (pure_expectation(proj, ref) + real_trace(rho) -
                             (proj.m * rho.m).trace().real());
            }
            acc += wij * err;
        }
    }
    return acc;
}

double pe_eand_finite(const LocalModel& model, const HeterodyneSettings& settings) {
    const EandQuad quad;
    return pe_eand_finite(model, settings, eand_signal_dim(model, settings, quad), quad);
}

std::pair<double, double> eand_zero_sector(double alpha0, double mu,
                                           const HeterodyneSettings& settings) {
    settings.require_axis_aligned("eand_zero_sector");
    if (!(alpha0 > 0.0)) throw DegeneracyError("eand_zero_sector: alpha0 = 0 degenerate", 0, 1);
    const double t = std::tanh(settings.r);
    const double inv_mu2 = 1.0 / (mu * mu);
    const double var = 0.5 / ((1.0 + t) + inv_mu2) + 0.5 / ((1.0 - t) + inv_mu2);
    const double x = alpha0 * alpha0;
    const double g0 = std::exp(-x);
    const double g1 = x * g0;
    const double g2 = 0.5 * x * x * g0;
    const double sq1_v3 = 1.0 - g1 / (1.0 - g0 - g2);
    const double sq1_v4 = g1 * g2 / ((1.0 - g0) * (1.0 - g0 - g2));
    return {var * sq1_v3, var * sq1_v4};
}

double delta_eand(double alpha0, double mu, const HeterodyneSettings& settings) {
    settings.require_axis_aligned("delta_eand");
    if (!(alpha0 > 0.0)) throw DegeneracyError("delta_eand: alpha0 = 0 degenerate", 0, 1);
    if (!(mu > 0.0)) throw InvalidInput("delta_eand: mu must be > 0");
    const double t = std::tanh(settings.r);
    const double x = alpha0 * alpha0;
    const double s = s_of(alpha0);
    const double em1 = std::expm1(x);
    const double mu2 = mu * mu;
    const double inv_mu2 = 1.0 / mu2;
    const double var = 0.5 / ((1.0 + t) + inv_mu2) + 0.5 / ((1.0 - t) + inv_mu2);

    const double sech2 = 1.0 - t * t;
    const double pi_d = mu2 * mu2 * sech2 + 2.0 * mu2 + 1.0;
    const double m11 = mu2 * mu2 * (mu2 * sech2 + 1.0) / pi_d;  // <|I1|^2> over outcomes
    const double m2 = mu2 * mu2 * t / pi_d;                     // <Re I1^2>

    const double p1perp = 1.0 - x / em1;
    const double cross_pm = m11 * (x * (1.0 + s * s) / (2.0 * em1)) +
                            2.0 * m2 * (-x * std::exp(-2.0 * x) / (4.0 * s * s));
    const double epm = mu2 * (-s - x * std::exp(-x) / s) + cross_pm / s + m11 * p1perp / s;
    const double lam34 = var * p1perp;
    return -0.5 * (epm + lam34);
}

double pe_eand_asymptotic(const LocalModel& model, const HeterodyneSettings& settings) {
    model.validate();
    return 0.5 * (1.0 - s_of(model.alpha0)) +
           delta_eand(model.alpha0, model.mu, settings) / (2.0 * model.n);
}

double excess_risk_eand(double alpha0, double r) {
    if (!(alpha0 > 0.0)) throw InvalidInput("excess_risk_eand: alpha0 must be > 0");
    const double x = alpha0 * alpha0;
    const double ex = std::exp(x);
    const double s = s_of(alpha0);
    const double em1 = std::expm1(x);
    const double pref = std::exp(-x) / (16.0 * s * em1);
    const double bracket = 4.0 * ex * (1.0 - ex) * (s - 1.0) + x * (4.0 * ex * s - 2.0);
    const double ch = std::cosh(r);
    return pref * (bracket * ch * ch + x * std::sinh(2.0 * r));
}

double optimal_squeezing(double alpha0) {
    if (!(alpha0 > 0.0)) throw InvalidInput("optimal_squeezing: alpha0 must be > 0");
    const double x = alpha0 * alpha0;
    const double ex = std::exp(x);
    const double s = s_of(alpha0);
    const double f = 2.0 * ex * std::expm1(x) * (s - 1.0) + x * (1.0 - 2.0 * ex * s);
    const double g = -f;
    if (!(g > x)) {
        throw NumericalError("optimal_squeezing: log argument left its domain");
    }
    return 0.25 * (std::log1p(-x / g) - std::log1p(x / g));
}

double excess_risk_eand_min(double alpha0) {
    return excess_risk_eand(alpha0, optimal_squeezing(alpha0));
}

McEstimate montecarlo_eand(const LocalModel& model, const HeterodyneSettings& settings,
                           long trials, std::uint64_t seed, const McOptions& opts) {
    settings.require_axis_aligned("montecarlo_eand");
    model.validate();
    if (trials < 1000) throw InvalidInput("montecarlo_eand: trials must be >= 1000");

    const EandQuad quad{opts.posterior_order, opts.posterior_order};
    const int dim =
        opts.signal_dim > 0 ? opts.signal_dim : eand_signal_dim(model, settings, quad, 1e-10);
    const FockKet ref = coherent_ket(-model.alpha0, dim);
    const FockMatrix ref_proj = FockMatrix::pure(ref);
    const double rootn = std::sqrt(double(model.n));
    const double u_scale = model.mu / std::sqrt(2.0);

    constexpr long kChunk = 2048;
    const long nchunks = (trials + kChunk - 1) / kChunk;
    std::vector<std::uint64_t> chunk_seeds(nchunks);
    std::uint64_t state = seed;
    for (long cidx = 0; cidx < nchunks; ++cidx) chunk_seeds[cidx] = splitmix64(state);

    std::vector<double> sums(nchunks, 0.0), sumsqs(nchunks, 0.0);
    std::atomic<long> next{0};
    const int workers = std::max(1, opts.workers);

    auto run_chunk = [&](long cidx) {
        GaussianSampler rng(chunk_seeds[cidx]);
        const long begin = cidx * kChunk;
        const long end = std::min(trials, begin + kChunk);
        double sum = 0.0, sumsq = 0.0;
        for (long trial = begin; trial < end; ++trial) {
            const Amplitude u(u_scale * rng.normal(), u_scale * rng.normal());
            const Amplitude alpha = model.alpha0 + u / rootn;
            const Amplitude beta_bar = sample_heterodyne(alpha, model.n, settings, rng);
            const Amplitude v = beta_bar - rootn * model.alpha0;

            FockMatrix hypothesis;
            if (opts.receiver == EandReceiver::posterior_optimal) {
                hypothesis =
                    posterior_signal_state(v, model, settings, dim, opts.posterior_order);
            } else {
                hypothesis = FockMatrix::pure(coherent_ket(v / rootn, dim));
            }
            const FockMatrix proj = helstrom_projector(hypothesis, ref_proj);
            const FockKet truth = coherent_ket(u / rootn, dim);
            const double p_err_vac = pure_expectation(proj, ref);       // decide signal on vacuum
            const double p_ok_sig = pure_expectation(proj, truth);      // decide signal on signal
            double err;
            if (!opts.raw_outcomes) {
                err = 0.5 * (p_err_vac + (1.0 - p_ok_sig));
            } else {
                const bool bit = rng.uniform() < 0.5;
                const double p_decide_signal = bit ? p_ok_sig : p_err_vac;
                const bool decide_signal = rng.uniform() < p_decide_signal;
                err = (decide_signal != bit) ? 1.0 : 0.0;
            }
            sum += err;
            sumsq += err * err;
        }
        sums[cidx] = sum;
        sumsqs[cidx] = sumsq;
    };

    if (workers == 1) {
        for (long cidx = 0; cidx < nchunks; ++cidx) run_chunk(cidx);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int t = 0; t < workers; ++t) {
            pool.emplace_back([&] {
                for (long cidx = next.fetch_add(1); cidx < nchunks; cidx = next.fetch_add(1)) {
                    run_chunk(cidx);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    double sum = 0.0, sumsq = 0.0;
    for (long cidx = 0; cidx < nchunks; ++cidx) {
        sum += sums[cidx];
        sumsq += sumsqs[cidx];
    }
    McEstimate est;
    est.trials = trials;
    est.seed = seed;
    est.mean = sum / trials;
    const double var = std::max(0.0, (sumsq - sum * sum / trials) / (trials - 1.0));
    est.std_error = std::sqrt(var / trials);
    return est;
}

}  // namespace cohdisc
