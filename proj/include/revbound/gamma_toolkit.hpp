#pragma once

namespace revbound::gamma {

/// A real carried alongside its logarithm so that values past the double
/// range (factorials of m > 170) stay usable.
struct LogReal {
    double value;    ///< may be +/-inf or 0 when out of range
    double log_abs;  ///< ln|value|; -inf for an exact zero
    int sign;        ///< -1, 0 or +1
};

/// Upper incomplete gamma for integer order:
/// Gamma(m, w) = (m-1)! e^{-w} sum_{k<m} w^k / k!.
/// For m > 30 the sum is accumulated in the log domain.
LogReal upper_incomplete_gamma(int m, double w);

/// g(m, w) = Gamma(m+1, w) - (m+1) Gamma(m, w).
double g(int m, double w);

/// Same function through the reduction g = w^m e^{-w} - Gamma(m, w).
double g_alternate(int m, double w);

/// Magnitude against which the two forms of g are compared:
/// max(Gamma(m+1, w), w^m e^{-w}).
double g_scale(int m, double w);

/// dg/dw = (m + 1 - w) w^{m-1} e^{-w}.
double g_derivative(int m, double w);

/// Sign of g(m, w) from the cancellation-free ratio
/// sum_{k<m} (m-1)!/k! w^{k-m}, which is < 1 exactly when g > 0.
int g_sign(int m, double w);

/// The unique positive root of g(m, .), found by bisection on [0, m+1].
double gamma_star(int m, double rel_tol = 1e-15);

struct GammaProfile {
    int m = 0;
    double gamma_star = 0.0;
    double G = 0.0;                  ///< (gamma*)^{m+1} e^{-gamma*}; inf past the double range
    double log_G = 0.0;
    double log_G_over_m_fact = 0.0;  ///< ln(G(m) / m!)
    double log_G_via_gamma = 0.0;    ///< ln(gamma* Gamma(m, gamma*)), the second route to G
};

/// G(m) = integral over w of max{0, g(m, w)}.
GammaProfile big_g(int m);

}  // namespace revbound::gamma
