#include "causalbound/closedform.hpp"

#include <cmath>
#include <numbers>

namespace causalbound {

Interval manski_ate(const BinaryJoint& j) {
    const double contrast = j.p[1][1] - j.p[0][1];
    return {contrast - j.px(1), contrast + j.px(0)};
}

Interval tianpearl_pns(const BinaryJoint& j) {
    return {0.0, j.p[1][1] + j.p[0][0]};
}

namespace {

struct Moments {
    double xbar = 0.0, ybar = 0.0, zbar = 0.0;
    double sxx = 0.0, sxy = 0.0, szz = 0.0, szx = 0.0, szy = 0.0;  // centred sums
};

Moments centred_moments(const Dataset& d) {
    Moments m;
    const double n = static_cast<double>(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        m.xbar += d.x[i];
        m.ybar += d.y[i];
        if (d.z) m.zbar += (*d.z)[i];
    }
    m.xbar /= n;
    m.ybar /= n;
    m.zbar /= n;
    for (std::size_t i = 0; i < d.size(); ++i) {
        const double dx = d.x[i] - m.xbar;
        const double dy = d.y[i] - m.ybar;
        m.sxx += dx * dx;
        m.sxy += dx * dy;
        if (d.z) {
            const double dz = (*d.z)[i] - m.zbar;
            m.szz += dz * dz;
            m.szx += dz * dx;
            m.szy += dz * dy;
        }
    }
    return m;
}

void check_level(double level) {
    if (!(level > 0.0 && level < 1.0))
        throw std::invalid_argument("confidence level must lie in (0, 1)");
}

}  // namespace

Interval ols_ate_ci(const Dataset& d, double level) {
    check_level(level);
    if (d.size() < 3) throw std::invalid_argument("OLS needs at least 3 units");
    const Moments m = centred_moments(d);
    if (m.sxx <= 0.0) throw data_error("no variance in treatment");

    const double beta = m.sxy / m.sxx;
    const double alpha = m.ybar - beta * m.xbar;
    double rss = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        const double e = d.y[i] - alpha - beta * d.x[i];
        rss += e * e;
    }
    const double s2 = rss / (static_cast<double>(d.size()) - 2.0);
    const double se = std::sqrt(s2 / m.sxx);
    const double q = normal_quantile(0.5 * (1.0 + level));
    return {beta - q * se, beta + q * se};
}

Interval tsls_ate_ci(const Dataset& d, double level) {
    check_level(level);
    if (!d.has_instrument())
        throw std::invalid_argument("2SLS requires an instrument column");
    if (d.size() < 3) throw std::invalid_argument("2SLS needs at least 3 units");
    const Moments m = centred_moments(d);
    const double n = static_cast<double>(d.size());
    if (std::abs(m.szx / n) < 1e-12) throw data_error("weak/irrelevant instrument");

    const double beta = m.szy / m.szx;
    const double alpha = m.ybar - beta * m.xbar;
    double rss = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        const double e = d.y[i] - alpha - beta * d.x[i];
        rss += e * e;
    }
    const double s2 = rss / (n - 2.0);
    const double se = std::sqrt(s2 * m.szz / (m.szx * m.szx));
    const double q = normal_quantile(0.5 * (1.0 + level));
    return {beta - q * se, beta + q * se};
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("quantile argument must lie in (0, 1)");

    // Acklam's rational approximation (|relative error| < 1.2e-9).
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double dd[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((dd[0] * q + dd[1]) * q + dd[2]) * q + dd[3]) * q + 1.0);
    } else if (p > 1.0 - plow) {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((dd[0] * q + dd[1]) * q + dd[2]) * q + dd[3]) * q + 1.0);
    } else {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
            q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }
    // One Halley step against the exact CDF tightens this to machine level.
    const double err = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
    const double u =
        err * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    return x - u / (1.0 + 0.5 * x * u);
}

}  // namespace causalbound
