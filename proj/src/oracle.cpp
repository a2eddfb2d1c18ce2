#include "nlab/oracle.hpp"

#include "nlab/errors.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace nlab::oracle {

namespace {

constexpr double pi = std::numbers::pi;

double pairwise_sum(const double* v, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    const std::size_t h = n / 2;
    return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

struct Inverse4 {
    double inv[4][4];
    double det;
};

// Gauss-Jordan with partial pivoting.
Inverse4 invert4(const double (&m)[4][4]) {
    double a[4][8];
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            a[i][j] = m[i][j];
            a[i][j + 4] = i == j ? 1.0 : 0.0;
        }
    }
    double det = 1.0;
    for (int c = 0; c < 4; ++c) {
        int piv = c;
        for (int r = c + 1; r < 4; ++r) {
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        }
        if (a[piv][c] == 0.0) throw MatrixNotPhysical("oracle: singular covariance matrix");
        if (piv != c) {
            for (int j = 0; j < 8; ++j) std::swap(a[c][j], a[piv][j]);
            det = -det;
        }
        const double p = a[c][c];
        det *= p;
        for (int j = 0; j < 8; ++j) a[c][j] /= p;
        for (int r = 0; r < 4; ++r) {
            if (r == c) continue;
            const double f = a[r][c];
            for (int j = 0; j < 8; ++j) a[r][j] -= f * a[c][j];
        }
    }
    Inverse4 out{};
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) out.inv[i][j] = a[i][j + 4];
    }
    out.det = det;
    return out;
}

Inverse4 invert_cm(const CovMat& V) {
    if (V.size() != 4) throw InvalidParameter("oracle: two-mode covariance matrix required");
    double m[4][4];
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) m[i][j] = static_cast<double>(V(i, j));
    }
    return invert4(m);
}

double quad_form(const double (&m)[4][4], const Point4& u) {
    double s = 0.0;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) s += u[i] * m[i][j] * u[j];
    }
    return s;
}

}  // namespace

double quadrature_integral(const std::function<double(const Point4&)>& f, const GridSpec& grid) {
    if (!(grid.half_width > 0) || grid.points < 2) {
        throw InvalidParameter("GridSpec needs L > 0 and N >= 2");
    }
    const int n = grid.points;
    const double h = 2 * grid.half_width / (n - 1);
    std::vector<double> x(n), w(n, h);
    for (int i = 0; i < n; ++i) x[i] = -grid.half_width + i * h;
    w.front() = w.back() = h / 2;

    std::vector<double> l3(n), l2(n), l1(n), l0(n);
    Point4 p{};
    for (int i = 0; i < n; ++i) {
        p[0] = x[i];
        for (int j = 0; j < n; ++j) {
            p[1] = x[j];
            for (int k = 0; k < n; ++k) {
                p[2] = x[k];
                for (int l = 0; l < n; ++l) {
                    p[3] = x[l];
                    l3[l] = w[l] * f(p);
                }
                l2[k] = w[k] * pairwise_sum(l3.data(), n);
            }
            l1[j] = w[j] * pairwise_sum(l2.data(), n);
        }
        l0[i] = w[i] * pairwise_sum(l1.data(), n);
    }
    return pairwise_sum(l0.data(), n);
}

double wigner_reference(const CovMat& V, const Point4& u) {
    const Inverse4 iv = invert_cm(V);
    if (!(iv.det > 0)) throw MatrixNotPhysical("oracle: det V <= 0");
    return std::exp(-quad_form(iv.inv, u)) / (pi * pi * std::sqrt(iv.det));
}

double husimi_convolution(const CovMat& V, const Point4& beta, const GridSpec& grid) {
    const Inverse4 iv = invert_cm(V);
    if (!(iv.det > 0)) throw MatrixNotPhysical("oracle: det V <= 0");
    const double wnorm = 1.0 / (pi * pi * std::sqrt(iv.det));
    auto integrand = [&](const Point4& a) {
        const double w = wnorm * std::exp(-quad_form(iv.inv, a));
        double d2 = 0.0;
        for (int k = 0; k < 4; ++k) d2 += (a[k] - beta[k]) * (a[k] - beta[k]);
        return w * std::exp(-2.0 * d2);
    };
    return 4.0 / (pi * pi) * quadrature_integral(integrand, grid);
}

CovMat tmsv_cm(double r) {
    const Real c = std::cosh(2 * Real(r)) / 2, s = std::sinh(2 * Real(r)) / 2;
    MatX V = MatX::Zero(4, 4);
    V(0, 0) = V(1, 1) = V(2, 2) = V(3, 3) = c;
    V(0, 2) = V(2, 0) = s;
    V(1, 3) = V(3, 1) = -s;
    return CovMat(std::move(V), {Mode::mech1, Mode::mech2});
}

std::complex<double> displacement_element(int m, int n, std::complex<double> beta) {
    const double x = std::norm(beta);
    const double env = std::exp(-x / 2);
    if (m >= n) {
        const int k = m - n;
        const double pref = std::exp((std::lgamma(n + 1.0) - std::lgamma(m + 1.0)) / 2);
        return pref * std::pow(beta, k) * env *
               std::assoc_laguerre(static_cast<unsigned>(n), static_cast<unsigned>(k), x);
    }
    const int k = n - m;
    const double pref = std::exp((std::lgamma(m + 1.0) - std::lgamma(n + 1.0)) / 2);
    return pref * std::pow(-std::conj(beta), k) * env *
           std::assoc_laguerre(static_cast<unsigned>(m), static_cast<unsigned>(k), x);
}

double fock_parity(double r, std::complex<double> alpha1, std::complex<double> alpha2, int cutoff) {
    if (cutoff < 1) throw CutoffTooSmall("Fock cutoff must be positive");
    const double lam = std::tanh(std::abs(r)) * (r < 0 ? -1.0 : 1.0);
    if (std::pow(lam * lam, cutoff) >= 1e-12) {
        throw CutoffTooSmall("Fock cutoff " + std::to_string(cutoff) +
                             " leaves a tail above 1e-12 for r = " + std::to_string(r));
    }
    // D(a) Pi D(a)^dag = D(2a) Pi, so <m|Pi(a)|n> = (-1)^n <m|D(2a)|n>
    const int dim = cutoff + 1;
    std::vector<std::complex<double>> p1(dim * dim), p2(dim * dim);
    for (int m = 0; m < dim; ++m) {
        for (int n = 0; n < dim; ++n) {
            const double sgn = n % 2 ? -1.0 : 1.0;
            p1[m * dim + n] = sgn * displacement_element(m, n, 2.0 * alpha1);
            p2[m * dim + n] = sgn * displacement_element(m, n, 2.0 * alpha2);
        }
    }
    std::complex<double> acc = 0.0;
    for (int m = 0; m < dim; ++m) {
        for (int n = 0; n < dim; ++n) {
            acc += std::pow(lam, m + n) * p1[m * dim + n] * p2[m * dim + n];
        }
    }
    return (1 - lam * lam) * acc.real();
}

}  // namespace nlab::oracle
