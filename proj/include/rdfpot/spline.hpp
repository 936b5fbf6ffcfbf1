#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace rdfpot {

/// Piecewise-cubic interpolant on equidistant nodes x_i = x0 + i*h with
/// not-a-knot end conditions. Reproduces polynomials up to degree three
/// exactly; degenerates gracefully for fewer than four nodes (quadratic,
/// line, constant).
class CubicSpline {
public:
    CubicSpline(double x0, double h, const std::vector<double>& y) : x0_(x0), h_(h) {
        if (!(h > 0.0)) throw std::invalid_argument("CubicSpline: spacing must be positive");
        if (y.empty()) throw std::invalid_argument("CubicSpline: no nodes");
        build(y);
    }

    double x_front() const { return x0_; }
    double x_back() const { return x0_ + h_ * static_cast<double>(n_seg_); }
    double spacing() const { return h_; }

    /// Value at x; the end segments extend polynomially outside [x0, x_back].
    double operator()(double x) const {
        const auto [s, t] = locate(x);
        return eval_segment(s, t);
    }

    double derivative(double x) const {
        const auto [s, t] = locate(x);
        return deriv_segment(s, t);
    }

    /// Evaluate on segment s at local offset t = x - x_s (t may be negative
    /// on the first segment, past h on the last). Exact at t = 0.
    double eval_segment(std::size_t s, double t) const {
        return a_[s] + t * (b_[s] + t * (c_[s] + t * d_[s]));
    }

    double deriv_segment(std::size_t s, double t) const {
        return b_[s] + t * (2.0 * c_[s] + 3.0 * t * d_[s]);
    }

    std::size_t segments() const { return n_seg_; }

private:
    std::pair<std::size_t, double> locate(double x) const {
        double rel = (x - x0_) / h_;
        std::size_t s = 0;
        if (rel > 0.0) {
            s = static_cast<std::size_t>(rel);
            if (s >= n_seg_) s = n_seg_ - 1;
        }
        return {s, x - (x0_ + h_ * static_cast<double>(s))};
    }

    void build(const std::vector<double>& y) {
        const std::size_t n = y.size();
        if (n == 1) {
            n_seg_ = 1;
            a_ = {y[0]};
            b_ = c_ = d_ = {0.0};
            return;
        }
        n_seg_ = n - 1;
        a_.assign(y.begin(), y.end() - 1);
        b_.assign(n_seg_, 0.0);
        c_.assign(n_seg_, 0.0);
        d_.assign(n_seg_, 0.0);
        if (n == 2) {
            b_[0] = (y[1] - y[0]) / h_;
            return;
        }
        if (n == 3) {
            // single quadratic through the three nodes
            const double c2 = (y[2] - 2.0 * y[1] + y[0]) / (2.0 * h_ * h_);
            const double b0 = (y[1] - y[0]) / h_ - c2 * h_;
            for (std::size_t s = 0; s < 2; ++s) {
                b_[s] = b0 + 2.0 * c2 * h_ * static_cast<double>(s);
                c_[s] = c2;
            }
            return;
        }
        // Second-derivative moments M_i. Not-a-knot on an equidistant grid
        // pins M_1 and M_{n-2} to the plain second differences.
        std::vector<double> M(n, 0.0);
        M[1] = (y[2] - 2.0 * y[1] + y[0]) / (h_ * h_);
        M[n - 2] = (y[n - 1] - 2.0 * y[n - 2] + y[n - 3]) / (h_ * h_);
        const std::size_t interior = n - 4; // unknowns M_2 .. M_{n-3}
        if (interior > 0) {
            std::vector<double> diag(interior, 4.0), rhs(interior);
            for (std::size_t i = 0; i < interior; ++i) {
                const std::size_t k = i + 2;
                rhs[i] = 6.0 * (y[k + 1] - 2.0 * y[k] + y[k - 1]) / (h_ * h_);
            }
            rhs[0] -= M[1];
            rhs[interior - 1] -= M[n - 2];
            // Thomas sweep with unit off-diagonals
            for (std::size_t i = 1; i < interior; ++i) {
                const double w = 1.0 / diag[i - 1];
                diag[i] -= w;
                rhs[i] -= w * rhs[i - 1];
            }
            M[interior + 1] = rhs[interior - 1] / diag[interior - 1];
            for (std::size_t i = interior - 1; i-- > 0;)
                M[i + 2] = (rhs[i] - M[i + 3]) / diag[i];
        }
        M[0] = 2.0 * M[1] - M[2];
        M[n - 1] = 2.0 * M[n - 2] - M[n - 3];
        for (std::size_t s = 0; s < n_seg_; ++s) {
            b_[s] = (y[s + 1] - y[s]) / h_ - h_ * (2.0 * M[s] + M[s + 1]) / 6.0;
            c_[s] = 0.5 * M[s];
            d_[s] = (M[s + 1] - M[s]) / (6.0 * h_);
        }
    }

    double x0_, h_;
    std::size_t n_seg_ = 0;
    std::vector<double> a_, b_, c_, d_;
};

} // namespace rdfpot
