#include "maxload/gaussian_max.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <string>
#include <vector>

#include "maxload/error.hpp"

namespace maxload {
namespace {

constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934;
constexpr double kSqrt32 = 5.656854249492380195206754896838;

// Returns {Phi(x), 1 - Phi(x)}. Coefficients from Cody (1993), ANORM.
std::pair<double, double> normal_cdf_both(double x) {
    static constexpr std::array<double, 5> a = {2.2352520354606839287, 161.02823106855587881,
                                                1067.6894854603709582, 18154.981253343561249,
                                                0.065682337918207449113};
    static constexpr std::array<double, 4> b = {47.20258190468824187, 976.09855173777669322,
                                                10260.932208618978205, 45507.789335026729956};
    static constexpr std::array<double, 9> c = {
        0.39894151208813466764, 8.8831497943883759412, 93.506656132177855979,
        597.27027639480026226,  2494.5375852903726711, 6848.1904505362823326,
        11602.651437647350124,  9842.7148383839780218, 1.0765576773720192317e-8};
    static constexpr std::array<double, 8> d = {
        22.266688044328115691, 235.38790178262499861, 1519.377599407554805,
        6485.558298266760755,  18615.571640885098091, 34900.952721145977266,
        38912.003286093271411, 19685.429676859990727};
    static constexpr std::array<double, 6> p = {0.21589853405795699,   0.1274011611602473639,
                                                0.022235277870649807,  0.001421619193227893466,
                                                2.9112874951168792e-5, 0.02307344176494017303};
    static constexpr std::array<double, 5> q = {1.28426009614491121, 0.468238212480865118,
                                                0.0659881378689285515, 0.00378239633202758244,
                                                7.29751555083966205e-5};

    const double y = std::fabs(x);
    double cum, ccum;
    if (y <= 0.67448975) {
        double xnum = 0.0, xden = 0.0;
        if (y > std::numeric_limits<double>::epsilon() * 0.5) {
            const double xsq = x * x;
            xnum = a[4] * xsq;
            xden = xsq;
            for (int i = 0; i < 3; ++i) {
                xnum = (xnum + a[i]) * xsq;
                xden = (xden + b[i]) * xsq;
            }
        }
        const double temp = x * (xnum + a[3]) / (xden + b[3]);
        return {0.5 + temp, 0.5 - temp};
    }
    if (y <= kSqrt32) {
        double xnum = c[8] * y;
        double xden = y;
        for (int i = 0; i < 7; ++i) {
            xnum = (xnum + c[i]) * y;
            xden = (xden + d[i]) * y;
        }
        const double temp = (xnum + c[7]) / (xden + d[7]);
        const double xsq = std::trunc(y * 16.0) / 16.0;
        const double del = (y - xsq) * (y + xsq);
        cum = std::exp(-xsq * xsq * 0.5) * std::exp(-del * 0.5) * temp;
        ccum = 1.0 - cum;
    } else {
        const double xsq = 1.0 / (x * x);
        double xnum = p[5] * xsq;
        double xden = xsq;
        for (int i = 0; i < 4; ++i) {
            xnum = (xnum + p[i]) * xsq;
            xden = (xden + q[i]) * xsq;
        }
        double temp = xsq * (xnum + p[4]) / (xden + q[4]);
        temp = (kInvSqrt2Pi - temp) / y;
        const double xs = std::trunc(x * 16.0) / 16.0;
        const double del = (x - xs) * (x + xs);
        cum = std::exp(-xs * xs * 0.5) * std::exp(-del * 0.5) * temp;
        ccum = 1.0 - cum;
    }
    // cum holds the tail beyond |x|.
    if (x > 0.0) std::swap(cum, ccum);
    return {cum, ccum};
}

// 15-point Kronrod nodes on [0, 1]; odd indices are the 7-point Gauss nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double lo, hi;
    double kronrod, error;
    int depth;

    bool operator<(const Panel& other) const { return error < other.error; }
};

template <class F>
Panel gauss_kronrod(const F& f, double lo, double hi, int depth) {
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double fc = f(center);
    double kronrod = fc * kWgk[7];
    double gauss = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double sum = f(center - dx) + f(center + dx);
        kronrod += kWgk[j] * sum;
        if (j % 2 == 1) gauss += kWg[j / 2] * sum;
    }
    return {lo, hi, kronrod * half, std::fabs((kronrod - gauss) * half), depth};
}

template <class F>
QuadratureResult integrate_adaptive(const F& f, double lo, double hi, int initial_panels,
                                    double abs_tol, int max_depth) {
    std::priority_queue<Panel> panels;
    double total = 0.0, error = 0.0;
    const double width = (hi - lo) / initial_panels;
    for (int i = 0; i < initial_panels; ++i) {
        const double a = lo + width * i;
        const double b = (i + 1 == initial_panels) ? hi : lo + width * (i + 1);
        Panel p = gauss_kronrod(f, a, b, 0);
        total += p.kronrod;
        error += p.error;
        panels.push(p);
    }
    while (error > abs_tol) {
        Panel worst = panels.top();
        if (worst.depth >= max_depth)
            throw ConvergenceError("quadrature did not reach abs_tol within refinement depth " +
                                       std::to_string(max_depth) +
                                       "; achieved error estimate " + std::to_string(error),
                                   error);
        panels.pop();
        const double mid = 0.5 * (worst.lo + worst.hi);
        Panel left = gauss_kronrod(f, worst.lo, mid, worst.depth + 1);
        Panel right = gauss_kronrod(f, mid, worst.hi, worst.depth + 1);
        total += left.kronrod + right.kronrod - worst.kronrod;
        error += left.error + right.error - worst.error;
        panels.push(left);
        panels.push(right);
    }
    // Re-sum to shed the drift of the running updates.
    total = 0.0;
    error = 0.0;
    while (!panels.empty()) {
        total += panels.top().kronrod;
        error += panels.top().error;
        panels.pop();
    }
    return {total, error};
}

}  // namespace

double std_normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double std_normal_cdf(double x) { return normal_cdf_both(x).first; }

double std_normal_log_cdf(double x) {
    if (x < 0.0) return std::log(normal_cdf_both(x).first);
    return std::log1p(-normal_cdf_both(x).second);
}

std::string_view method_name(MaxMethod m) {
    switch (m) {
        case MaxMethod::closed_form: return "closed_form";
        case MaxMethod::quadrature: return "quadrature";
        case MaxMethod::asymptotic: return "asymptotic";
    }
    return "unknown";
}

void QuadratureConfig::validate() const {
    if (!(abs_tol > 0.0)) throw ParameterError("abs_tol must be > 0");
    if (!(truncation > 0.0)) throw ParameterError("truncation L must be > 0");
    if (max_refinement_depth < 0) throw ParameterError("max_refinement_depth must be >= 0");
}

GaussianMaxValue expected_max_closed_form(std::int64_t n) {
    using std::numbers::pi;
    const double inv_sqrt_pi = 1.0 / std::sqrt(pi);
    const double inv_pi_3_2 = inv_sqrt_pi / pi;
    double value;
    switch (n) {
        case 1: value = 0.0; break;
        case 2: value = inv_sqrt_pi; break;
        case 3: value = 1.5 * inv_sqrt_pi; break;
        case 4: value = 3.0 * inv_pi_3_2 * std::acos(-1.0 / 3.0); break;
        case 5: value = 2.5 * inv_pi_3_2 * std::acos(-23.0 / 27.0); break;
        default:
            throw UnsupportedError("no closed form for E[max of n Gaussians] with n = " +
                                   std::to_string(n) + " (supported: 1..5)");
    }
    return {n, value, MaxMethod::closed_form, 8.0 * std::numeric_limits<double>::epsilon()};
}

QuadratureResult max_moment(std::int64_t n, int power, const QuadratureConfig& cfg) {
    if (n < 1) throw ParameterError("n must be >= 1 (got " + std::to_string(n) + ")");
    if (power < 0) throw ParameterError("power must be >= 0");
    cfg.validate();
    const double nd = static_cast<double>(n);
    const double exponent = nd - 1.0;
    auto integrand = [&](double x) {
        // Phi^(n-1) in log space; plain powers underflow for large n.
        const double cdf_pow = n == 1 ? 1.0 : std::exp(exponent * std_normal_log_cdf(x));
        double xp = 1.0;
        for (int k = 0; k < power; ++k) xp *= x;
        return xp * nd * std_normal_pdf(x) * cdf_pow;
    };
    const double L = cfg.truncation;
    const int panels = std::max(2, static_cast<int>(std::ceil(2.0 * L)));
    QuadratureResult r = integrate_adaptive(integrand, -L, L, panels, cfg.abs_tol, cfg.max_refinement_depth);
    // Both tails: |x|^p n phi Phi^(n-1) beyond L integrates to at most
    // n (1 - Phi(L)) (L + 1)^p on each side.
    const double upper_tail = normal_cdf_both(L).second;
    r.error_bound += 2.0 * nd * upper_tail * std::pow(L + 1.0, power);
    return r;
}

GaussianMaxValue expected_max_quadrature(std::int64_t n, const QuadratureConfig& cfg) {
    const QuadratureResult r = max_moment(n, 1, cfg);
    double value = r.value;
    if (value < 0.0 && -value <= r.error_bound) value = 0.0;
    return {n, value, MaxMethod::quadrature, r.error_bound};
}

double expected_max_asymptotic(std::int64_t n) {
    if (n < 2) throw ParameterError("asymptotic E[max] needs n >= 2 (got " + std::to_string(n) + ")");
    return std::sqrt(2.0 * std::log(static_cast<double>(n)));
}

}  // namespace maxload
