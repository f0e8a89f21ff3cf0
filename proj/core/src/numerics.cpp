#include "csf/numerics.hpp"

#include <algorithm>
#include <stdexcept>

namespace csf {

namespace {

double interior_slope(double h0, double h1, double d0, double d1) {
    if (d0 * d1 <= 0.0) return 0.0;
    const double w1 = 2.0 * h1 + h0;
    const double w2 = h1 + 2.0 * h0;
    return (w1 + w2) / (w1 / d0 + w2 / d1);
}

double end_slope(double h0, double h1, double d0, double d1) {
    double d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (d * d0 <= 0.0) return 0.0;
    if (d0 * d1 <= 0.0 && std::abs(d) > std::abs(3.0 * d0)) return 3.0 * d0;
    return d;
}

}  // namespace

Pchip::Pchip(std::span<const double> x, std::span<const double> y, bool periodic)
    : x_(x.begin(), x.end()), y_(y.begin(), y.end()), d_(x.size(), 0.0) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n) throw std::invalid_argument("pchip needs matching arrays of size >= 2");
    std::vector<double> h(n - 1);
    std::vector<double> delta(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        h[k] = x_[k + 1] - x_[k];
        if (!(h[k] > 0.0)) throw std::invalid_argument("pchip abscissae must increase strictly");
        delta[k] = (y_[k + 1] - y_[k]) / h[k];
    }
    if (n == 2) {
        d_[0] = d_[1] = delta[0];
        return;
    }
    for (std::size_t k = 1; k + 1 < n; ++k) d_[k] = interior_slope(h[k - 1], h[k], delta[k - 1], delta[k]);
    if (periodic) {
        d_[0] = interior_slope(h[n - 2], h[0], delta[n - 2], delta[0]);
        d_[n - 1] = d_[0];
    } else {
        d_[0] = end_slope(h[0], h[1], delta[0], delta[1]);
        d_[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    }
}

double Pchip::operator()(double xq) const {
    const std::size_t n = x_.size();
    std::size_t k;
    if (xq <= x_.front()) {
        k = 0;
    } else if (xq >= x_.back()) {
        k = n - 2;
    } else {
        k = static_cast<std::size_t>(std::upper_bound(x_.begin(), x_.end(), xq) - x_.begin()) - 1;
        k = std::min(k, n - 2);
    }
    const double h = x_[k + 1] - x_[k];
    const double t = (xq - x_[k]) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    const double h10 = t3 - 2.0 * t2 + t;
    const double h01 = -2.0 * t3 + 3.0 * t2;
    const double h11 = t3 - t2;
    return h00 * y_[k] + h10 * h * d_[k] + h01 * y_[k + 1] + h11 * h * d_[k + 1];
}

double lerp_table(std::span<const double> x, std::span<const double> y, double xq) {
    if (xq <= x.front()) return y.front();
    if (xq >= x.back()) return y.back();
    const auto it = std::upper_bound(x.begin(), x.end(), xq);
    const std::size_t k = static_cast<std::size_t>(it - x.begin()) - 1;
    const double t = (xq - x[k]) / (x[k + 1] - x[k]);
    return y[k] + t * (y[k + 1] - y[k]);
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) throw std::invalid_argument("line fit needs at least 2 points");
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0)) throw std::invalid_argument("line fit needs distinct abscissae");
    const double slope = sxy / sxx;
    return {my - slope * mx, slope};
}

GaussRule gauss_legendre(std::size_t order) {
    GaussRule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    const double n = static_cast<double>(order);
    for (std::size_t i = 0; i < order; ++i) {
        double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (n + 0.5));
        double dp = 1.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = z;
            for (std::size_t k = 2; k <= order; ++k) {
                const double kk = static_cast<double>(k);
                const double p2 = ((2.0 * kk - 1.0) * z * p1 - (kk - 1.0) * p0) / kk;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        double p0 = 1.0;
        double p1 = z;
        for (std::size_t k = 2; k <= order; ++k) {
            const double kk = static_cast<double>(k);
            const double p2 = ((2.0 * kk - 1.0) * z * p1 - (kk - 1.0) * p0) / kk;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (z * p1 - p0) / (z * z - 1.0);
        rule.nodes[order - 1 - i] = z;
        rule.weights[order - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    return rule;
}

}  // namespace csf
