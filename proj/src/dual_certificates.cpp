#include "revbound/dual_certificates.hpp"

#include <algorithm>
#include <array>
#include <boost/multiprecision/cpp_int.hpp>
#include <boost/random/sobol.hpp>
#include <cmath>
#include <numeric>
#include <sstream>

#include "revbound/bounds.hpp"
#include "revbound/errors.hpp"
#include "revbound/gamma_toolkit.hpp"
#include "revbound/parallel.hpp"

namespace revbound::duals {
namespace {

constexpr int kMaxDim = 4;
using Point = std::array<double, kMaxDim>;

// Per-chunk accumulator; chunks are reduced in index order.
struct Partial {
    double boundary = 0.0;
    double derivative = 0.0;
    double gap = 0.0;
    std::size_t violations = 0;
    std::size_t checked = 0;
    std::size_t skipped = 0;
    double integral = 0.0;

    void merge(const Partial& o) {
        boundary = std::max(boundary, o.boundary);
        derivative = std::max(derivative, o.derivative);
        gap = std::max(gap, o.gap);
        violations += o.violations;
        checked += o.checked;
        skipped += o.skipped;
        integral += o.integral;
    }
};

/// Visits every tuple in [0,n)^dims whose first index is `lead`.
template <class Visit>
void for_each_tail(int dims, int n, int lead, Visit&& visit) {
    std::array<int, kMaxDim> idx{};
    idx[0] = lead;
    while (true) {
        visit(idx);
        int d = dims - 1;
        while (d >= 1 && ++idx[d] == n) idx[d--] = 0;
        if (d < 1) return;
    }
}

double uniform_from_sobol(std::uint64_t bits) {
    return std::ldexp(static_cast<double>(bits >> 11), -53);
}

}  // namespace

// ---------------------------------------------------------------- uniform

UniformDual::UniformDual(int m) : m_(m) {
    if (m < 1) throw InvalidArgument("uniform dual needs m >= 1");
}

std::vector<double> UniformDual::kinks() const {
    std::vector<double> out;
    for (int i = 1; i <= m_; ++i) out.push_back(static_cast<double>(i) / (m_ + 1));
    return out;
}

int UniformDual::active_count(std::span<const double> x) const {
    const double t = threshold();
    int k = 0;
    for (int i = 0; i < m_; ++i) k += x[i] > t ? 1 : 0;
    return k;
}

double UniformDual::z(std::size_t j, std::span<const double> x) const {
    if (!(x[j] > threshold())) return 0.0;
    const int k = active_count(x);
    const double c = 1.0 - static_cast<double>(k) / (m_ + 1);
    return std::max(0.0, (m_ + 1.0) / k * (x[j] - c));
}

double UniformDual::analytic_partial(std::size_t j, std::span<const double> x) const {
    if (!(x[j] > threshold())) return 0.0;
    const int k = active_count(x);
    const double c = 1.0 - static_cast<double>(k) / (m_ + 1);
    return x[j] > c ? (m_ + 1.0) / k : 0.0;
}

FeasibilityReport verify_uniform_dual(int m, int n) {
    if (m < 1 || m > kMaxDim) throw InvalidArgument("uniform dual verification supports m in 1..4");
    if (n < 50) throw InvalidArgument("uniform dual verification needs at least 50 grid points per axis");
    const UniformDual dual(m);
    const double step = 1.0 / n;
    const double h = 0.5 * step;
    const double cap = m + 1.0;
    constexpr double kTol = 1e-6;

    // Cell i spans [i/n, (i+1)/n]; kink p/(m+1) is strictly inside iff
    // i (m+1) < p n < (i+1)(m+1).
    std::vector<char> straddles(n, 0);
    for (int i = 0; i < n; ++i)
        for (int p = 1; p <= m; ++p) {
            const long pn = static_cast<long>(p) * n;
            if (static_cast<long>(i) * (m + 1) < pn && pn < static_cast<long>(i + 1) * (m + 1))
                straddles[i] = 1;
        }
    const auto clean = static_cast<std::size_t>(std::count(straddles.begin(), straddles.end(), 0));
    double total_cells = 1.0, clean_cells = 1.0;
    for (int d = 0; d < m; ++d) {
        total_cells *= n;
        clean_cells *= static_cast<double>(clean);
    }
    if ((total_cells - clean_cells) / total_cells > 0.2) {
        std::ostringstream msg;
        msg << "grid of " << n << " points per axis leaves "
            << 100.0 * (total_cells - clean_cells) / total_cells << "% of cells on kinks";
        throw GridTooCoarse(msg.str());
    }

    // Objective nodes: the uniform grid merged with every kink location.
    std::vector<double> nodes;
    for (int i = 0; i <= n; ++i) nodes.push_back(static_cast<double>(i) / n);
    for (double k : dual.kinks()) nodes.push_back(k);
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end(),
                            [](double a, double b) { return std::abs(a - b) < 1e-13; }),
                nodes.end());
    const int cells = static_cast<int>(nodes.size()) - 1;

    std::vector<Partial> partial(static_cast<std::size_t>(std::max(n, cells)));
    for_each_chunk(partial.size(), [&](std::size_t chunk) {
        Partial acc;
        const int lead = static_cast<int>(chunk);
        Point x{}, probe{};
        std::span<const double> xs(x.data(), m), ps(probe.data(), m);

        if (lead < n) {
            // Derivative constraint on cells of the uniform grid.
            for_each_tail(m, n, lead, [&](const std::array<int, kMaxDim>& idx) {
                bool skip = false;
                for (int d = 0; d < m; ++d) {
                    x[d] = (idx[d] + 0.5) * step;
                    skip = skip || straddles[idx[d]];
                }
                if (skip) {
                    ++acc.skipped;
                    return;
                }
                ++acc.checked;
                double sum = 0.0;
                for (int j = 0; j < m; ++j) {
                    probe = x;
                    probe[j] = x[j] + h;
                    const double up = dual.z(j, ps);
                    probe[j] = x[j] - h;
                    const double down = dual.z(j, ps);
                    const double fd = (up - down) / (2.0 * h);
                    sum += fd;
                    acc.gap = std::max(acc.gap, std::abs(fd - dual.analytic_partial(j, xs)));
                }
                const double residual = std::max({0.0, sum - cap, -sum});
                acc.derivative = std::max(acc.derivative, residual);
                if (residual > kTol) ++acc.violations;
            });
            // Boundary conditions on the faces x_j = 0 and x_j = 1; the face
            // grid reuses the cell midpoints of the other axes.
            if (m == 1) {
                if (lead == 0) {
                    x[0] = 0.0;
                    acc.boundary = std::max(acc.boundary, std::abs(dual.z(0, xs)));
                    x[0] = 1.0;
                    acc.boundary = std::max(acc.boundary, std::max(0.0, 1.0 - dual.z(0, xs)));
                }
            } else {
                for_each_tail(m, n, lead, [&](const std::array<int, kMaxDim>& idx) {
                    if (idx[m - 1] != 0) return;
                    // idx[0..m-2] enumerate the face coordinates.
                    for (int j = 0; j < m; ++j) {
                        int f = 0;
                        for (int d = 0; d < m; ++d) {
                            if (d == j) continue;
                            x[d] = (idx[f++] + 0.5) * step;
                        }
                        x[j] = 0.0;
                        acc.boundary = std::max(acc.boundary, std::abs(dual.z(j, xs)));
                        x[j] = 1.0;
                        acc.boundary = std::max(acc.boundary, std::max(0.0, 1.0 - dual.z(j, xs)));
                    }
                });
            }
        }
        if (lead < cells) {
            for_each_tail(m, cells, lead, [&](const std::array<int, kMaxDim>& idx) {
                double volume = 1.0;
                for (int d = 0; d < m; ++d) {
                    x[d] = 0.5 * (nodes[idx[d]] + nodes[idx[d] + 1]);
                    volume *= nodes[idx[d] + 1] - nodes[idx[d]];
                }
                double total = 0.0;
                for (int j = 0; j < m; ++j) total += dual.z(j, xs);
                acc.integral += total * volume;
            });
        }
        partial[chunk] = acc;
    });

    Partial sum;
    for (const auto& p : partial) sum.merge(p);
    FeasibilityReport r;
    r.m = m;
    r.max_boundary_residual = sum.boundary;
    r.max_derivative_residual = sum.derivative;
    r.max_analytic_gap = sum.gap;
    r.derivative_violations = sum.violations;
    r.derivative_tolerance = kTol;
    r.cells_checked = sum.checked;
    r.cells_skipped_at_kinks = sum.skipped;
    r.objective_numeric = sum.integral;
    r.objective_closed_form = bounds::uniform_upper_bound(m);
    r.relative_gap = std::abs(r.objective_numeric - r.objective_closed_form) / r.objective_closed_form;
    r.integration_method = "midpoint (kink-aligned nodes)";
    r.integration_points = static_cast<std::size_t>(std::pow(cells, m));
    return r;
}

// ------------------------------------------------------------ exponential

ExponentialDual::ExponentialDual(std::vector<double> rates) : rates_(std::move(rates)) {
    if (rates_.empty()) throw InvalidArgument("exponential dual needs at least one rate");
    rate_product_ = 1.0;
    for (double r : rates_) {
        if (!(std::isfinite(r) && r > 0.0)) throw InvalidArgument("rates must be positive and finite");
        rate_product_ *= r;
    }
    gamma_star_ = gamma::gamma_star(items());
}

double ExponentialDual::w(std::span<const double> x) const {
    double s = 0.0;
    for (std::size_t j = 0; j < rates_.size(); ++j) s += rates_[j] * x[j];
    return s;
}

double ExponentialDual::positive_branch(std::size_t j, std::span<const double> x) const {
    const double ww = w(x);
    const int m = items();
    return rate_product_ * x[j] * std::pow(ww, -m) * gamma::g(m, ww);
}

double ExponentialDual::z(std::size_t j, std::span<const double> x) const {
    if (w(x) < gamma_star_) return 0.0;
    return std::max(0.0, positive_branch(j, x));
}

double ExponentialDual::analytic_partial(std::size_t j, std::span<const double> x) const {
    const double ww = w(x);
    if (ww < gamma_star_) return 0.0;
    const int m = items();
    const double gv = gamma::g(m, ww);
    const double inv_wm = std::pow(ww, -m);
    return rate_product_ * inv_wm * gv +
           rate_product_ * rates_[j] * x[j] *
               ((m + 1 - ww) * std::exp(-ww) / ww - m * inv_wm / ww * gv);
}

double ExponentialDual::derivative_cap(std::span<const double> x) const {
    const double ww = w(x);
    return rate_product_ * (items() + 1 - ww) * std::exp(-ww);
}

FeasibilityReport verify_exponential_dual(const std::vector<double>& rates,
                                          const ExponentialGridSpec& spec) {
    const ExponentialDual dual(rates);
    const int m = dual.items();
    if (m > 3) throw InvalidArgument("exponential dual verification supports m <= 3");
    const double gs = dual.gamma_star();
    const double w_max = spec.w_max > 0.0 ? spec.w_max : gs + 40.0;
    if (w_max < gs + 40.0) throw InvalidArgument("w_max must be at least gamma*_m + 40");
    if (spec.points_per_axis < 2) throw InvalidArgument("need at least 2 grid points per axis");

    FeasibilityReport r;
    r.m = m;
    r.objective_closed_form = bounds::exponential_upper_bound(rates);
    // Outside the box w > w_max, and the dual mass there is
    // (sum 1/rate_j / m!) * w_max Gamma(m, w_max).
    double inverse_sum = 0.0;
    for (double rate : rates) inverse_sum += 1.0 / rate;
    r.truncation_tail_bound =
        inverse_sum * std::exp(std::log(w_max) + gamma::upper_incomplete_gamma(m, w_max).log_abs -
                               std::lgamma(m + 1.0));
    if (r.truncation_tail_bound > 1e-6 * r.objective_closed_form) {
        std::ostringstream msg;
        msg << "tail beyond w_max=" << w_max << " carries " << r.truncation_tail_bound
            << ", above 1e-6 of the bound";
        throw TruncationInsufficient(msg.str());
    }

    std::array<double, 3> extent{};
    for (int j = 0; j < m; ++j) extent[j] = w_max / rates[j];
    constexpr double kTol = 1e-9;
    // Fixed small step for the central differences: the exact partial sum
    // meets the cap with equality above gamma*, so the stencil error must sit
    // well below the tolerance.
    constexpr double kFdStep = 1e-5;

    const int nd = m == 3 ? std::min(spec.points_per_axis, spec.derivative_grid_3d) : spec.points_per_axis;
    const int no = spec.points_per_axis;
    constexpr int kRefine = 8;

    std::vector<Partial> partial(static_cast<std::size_t>(std::max(nd, no)));
    for_each_chunk(partial.size(), [&](std::size_t chunk) {
        Partial acc;
        const int lead = static_cast<int>(chunk);
        Point x{}, probe{};
        std::span<const double> xs(x.data(), m), ps(probe.data(), m);

        auto cell_range = [&](const std::array<int, kMaxDim>& idx, int n, double& lo, double& hi) {
            lo = hi = 0.0;
            for (int d = 0; d < m; ++d) {
                const double s = extent[d] / n;
                lo += rates[d] * idx[d] * s;
                hi += rates[d] * (idx[d] + 1) * s;
            }
        };

        if (lead < nd) {
            for_each_tail(m, nd, lead, [&](const std::array<int, kMaxDim>& idx) {
                double lo, hi;
                cell_range(idx, nd, lo, hi);
                if (lo < gs && gs < hi) {
                    ++acc.skipped;
                    return;
                }
                ++acc.checked;
                for (int d = 0; d < m; ++d) x[d] = (idx[d] + 0.5) * extent[d] / nd;
                double sum = 0.0;
                for (int j = 0; j < m; ++j) {
                    const double hj = kFdStep / rates[j];
                    probe = x;
                    probe[j] = x[j] + hj;
                    const double up = dual.z(j, ps);
                    probe[j] = x[j] - hj;
                    const double down = dual.z(j, ps);
                    const double fd = (up - down) / (2.0 * hj);
                    sum += fd;
                    acc.gap = std::max(acc.gap, std::abs(fd - dual.analytic_partial(j, xs)));
                }
                const double residual = std::max(0.0, sum - dual.derivative_cap(xs));
                acc.derivative = std::max(acc.derivative, residual);
                if (residual > kTol) ++acc.violations;
            });
            // z_j(0, x_{-j}) = 0 on the faces through the origin.
            for_each_tail(m, nd, lead, [&](const std::array<int, kMaxDim>& idx) {
                if (m > 1 && idx[m - 1] != 0) return;
                if (m == 1 && lead != 0) return;
                for (int j = 0; j < m; ++j) {
                    int f = 0;
                    for (int d = 0; d < m; ++d) {
                        if (d == j) continue;
                        x[d] = (idx[f++] + 0.5) * extent[d] / nd;
                    }
                    x[j] = 0.0;
                    acc.boundary = std::max(acc.boundary, std::abs(dual.z(j, xs)));
                }
            });
        }

        if (m <= 2 && lead < no) {
            // Midpoint rule; cells cut by w = gamma* get kRefine^m sub-midpoints.
            for_each_tail(m, no, lead, [&](const std::array<int, kMaxDim>& idx) {
                double lo, hi;
                cell_range(idx, no, lo, hi);
                if (hi <= gs) return;
                double volume = 1.0;
                for (int d = 0; d < m; ++d) volume *= extent[d] / no;
                const int sub = (lo < gs) ? kRefine : 1;
                const int subcells = m == 1 ? sub : sub * sub;
                double total = 0.0;
                for (int s = 0; s < subcells; ++s) {
                    const int s0 = s % sub, s1 = s / sub;
                    x[0] = (idx[0] + (s0 + 0.5) / sub) * extent[0] / no;
                    if (m == 2) x[1] = (idx[1] + (s1 + 0.5) / sub) * extent[1] / no;
                    for (int j = 0; j < m; ++j) total += dual.z(j, xs);
                }
                acc.integral += total * volume / subcells;
            });
        }
        partial[chunk] = acc;
    });

    Partial sum;
    for (const auto& p : partial) sum.merge(p);

    if (m == 3) {
        // Scrambling-free Sobol points, in fixed-size batches reduced in order.
        const std::size_t n = spec.qmc_points;
        if (n == 0) throw InvalidArgument("need a positive number of quasi-random points");
        constexpr std::size_t kBatch = std::size_t{1} << 18;
        const std::size_t batches = (n + kBatch - 1) / kBatch;
        std::vector<double> batch_sum(batches, 0.0);
        for_each_chunk(batches, [&](std::size_t b) {
            boost::random::sobol qrng(3);
            qrng.discard(3 * b * kBatch);
            Point x{};
            std::span<const double> xs(x.data(), 3);
            double acc = 0.0;
            const std::size_t end = std::min(n, (b + 1) * kBatch);
            for (std::size_t i = b * kBatch; i < end; ++i) {
                for (int d = 0; d < 3; ++d) x[d] = uniform_from_sobol(qrng()) * extent[d];
                for (int j = 0; j < 3; ++j) acc += dual.z(j, xs);
            }
            batch_sum[b] = acc;
        });
        const double total = std::accumulate(batch_sum.begin(), batch_sum.end(), 0.0);
        sum.integral = total / static_cast<double>(n) * extent[0] * extent[1] * extent[2];
        r.integration_method = "sobol quasi-monte-carlo";
        r.integration_points = n;
    } else {
        r.integration_method = "midpoint (kink cells refined)";
        r.integration_points = static_cast<std::size_t>(std::pow(no, m));
    }

    r.max_boundary_residual = sum.boundary;
    r.max_derivative_residual = sum.derivative;
    r.max_analytic_gap = sum.gap;
    r.derivative_violations = sum.violations;
    r.derivative_tolerance = kTol;
    r.cells_checked = sum.checked;
    r.cells_skipped_at_kinks = sum.skipped;
    r.objective_numeric = sum.integral;
    r.relative_gap = std::abs(r.objective_numeric - r.objective_closed_form) / r.objective_closed_form;
    return r;
}

// --------------------------------------------------------- exact identities

IdentityCheck appendix_c_identity(int m) {
    using boost::multiprecision::cpp_int;
    using boost::multiprecision::cpp_rational;
    if (m < 1) throw InvalidArgument("identity needs m >= 1");
    cpp_int lhs = 0, binom = 1, power = 1;  // power = m^{k-1}
    for (int k = 1; k <= m; ++k) {
        binom = binom * (m - k + 1) / k;
        lhs += binom * k * k * power;
        power *= m;
    }
    cpp_rational rhs = cpp_rational(cpp_int(m) * (1 + cpp_int(m) * m));
    if (m >= 2) {
        rhs *= boost::multiprecision::pow(cpp_int(m + 1), static_cast<unsigned>(m - 2));
    } else {
        rhs /= cpp_int(m + 1);  // (m+1)^{-1} at m = 1
    }
    IdentityCheck out;
    out.m = m;
    out.lhs = lhs.str();
    out.rhs = rhs.str();
    out.holds = cpp_rational(lhs) == rhs;
    return out;
}

SimplexMoments simplex_moments(int m, std::size_t qmc_points) {
    if (m < 2) throw InvalidArgument("simplex moments need m >= 2");
    SimplexMoments s;
    s.m = m;
    s.log_volume = -std::lgamma(static_cast<double>(m));
    s.log_first_moment = -std::lgamma(m + 1.0);
    s.volume = std::exp(s.log_volume);
    s.first_moment = std::exp(s.log_first_moment);
    if (m > 6 || qmc_points == 0) return s;

    const int dim = m - 1;
    constexpr std::size_t kBatch = std::size_t{1} << 18;
    const std::size_t batches = (qmc_points + kBatch - 1) / kBatch;
    std::vector<std::pair<double, double>> parts(batches);
    for_each_chunk(batches, [&](std::size_t b) {
        boost::random::sobol qrng(static_cast<std::size_t>(dim));
        qrng.discard(static_cast<std::uintmax_t>(dim) * b * kBatch);
        double hits = 0.0, moment = 0.0;
        const std::size_t end = std::min(qmc_points, (b + 1) * kBatch);
        for (std::size_t i = b * kBatch; i < end; ++i) {
            double total = 0.0, first = 0.0;
            for (int d = 0; d < dim; ++d) {
                const double t = uniform_from_sobol(qrng());
                if (d == 0) first = t;
                total += t;
            }
            if (total <= 1.0) {
                hits += 1.0;
                moment += first;
            }
        }
        parts[b] = {hits, moment};
    });
    double hits = 0.0, moment = 0.0;
    for (const auto& [h, mo] : parts) {
        hits += h;
        moment += mo;
    }
    s.estimated = true;
    s.points = qmc_points;
    s.volume_estimate = hits / static_cast<double>(qmc_points);
    s.moment_estimate = moment / static_cast<double>(qmc_points);
    return s;
}

}  // namespace revbound::duals
