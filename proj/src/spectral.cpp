#include "vort2d/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace vort {

namespace {

// In-place iterative radix-2 Cooley-Tukey, sign = -1 forward / +1 inverse
// (unnormalized).
void fft_1d(cplx* data, int n, int stride, int sign, std::vector<cplx>& scratch) {
    if (n == 1) return;
    scratch.resize(n);
    for (int i = 0; i < n; ++i) scratch[i] = data[static_cast<std::size_t>(i) * stride];

    // bit-reversal permutation
    int j = 0;
    for (int i = 0; i < n - 1; ++i) {
        if (i < j) std::swap(scratch[i], scratch[j]);
        int m = n >> 1;
        while (j >= m && m > 0) {
            j -= m;
            m >>= 1;
        }
        j += m;
    }
    for (int len = 2; len <= n; len <<= 1) {
        const double ang = sign * kTwoPi / len;
        const cplx wlen(std::cos(ang), std::sin(ang));
        for (int i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (int h = 0; h < len / 2; ++h) {
                const cplx u = scratch[i + h];
                const cplx v = scratch[i + h + len / 2] * w;
                scratch[i + h] = u + v;
                scratch[i + h + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    for (int i = 0; i < n; ++i) data[static_cast<std::size_t>(i) * stride] = scratch[i];
}

void fft_2d(std::vector<cplx>& a, int n, int sign) {
    std::vector<cplx> scratch;
    for (int row = 0; row < n; ++row)
        fft_1d(a.data() + static_cast<std::size_t>(row) * n, n, 1, sign, scratch);
    for (int col = 0; col < n; ++col) fft_1d(a.data() + col, n, n, sign, scratch);
}

void require_grid(int n, int cutoff, const char* op) {
    if (n < 2 * cutoff + 2)
        throw std::invalid_argument(std::string(op) +
                                    ": requires n >= 2*cutoff + 2, got n=" +
                                    std::to_string(n) + " cutoff=" + std::to_string(cutoff));
    if (!is_power_of_two(n))
        throw std::invalid_argument(std::string(op) +
                                    ": transform backend requires n to be a power of two, got n=" +
                                    std::to_string(n));
}

}  // namespace

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

int next_power_of_two(int n) {
    int p = 1;
    while (p < n) p <<= 1;
    return p;
}

double SpectralField::max_hermitian_defect() const {
    double d = 0.0;
    for (int k1 = -cutoff_; k1 <= cutoff_; ++k1)
        for (int k2 = -cutoff_; k2 <= cutoff_; ++k2)
            d = std::max(d, std::abs(at(k1, k2) - std::conj(at(-k1, -k2))));
    d = std::max(d, std::abs(at(0, 0)));
    return d;
}

double SpectralField::max_abs() const {
    double m = 0.0;
    for (const cplx& c : coeffs_) m = std::max(m, std::abs(c));
    return m;
}

double SpectralField::point_value(double x1, double x2) const {
    // Hermitian pairing: sum over the positive half-lattice of 2*Re(c e^{ik.x}).
    double acc = 0.0;
    for (int k1 = -cutoff_; k1 <= cutoff_; ++k1) {
        for (int k2 = -cutoff_; k2 <= cutoff_; ++k2) {
            if (!in_positive_half({k1, k2})) continue;
            const cplx c = at(k1, k2);
            if (c == cplx(0.0, 0.0)) continue;
            const double ph = k1 * x1 + k2 * x2;
            acc += 2.0 * (c.real() * std::cos(ph) - c.imag() * std::sin(ph));
        }
    }
    return acc / kTwoPi;
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
}

SpectralField& SpectralField::operator*=(double s) {
    for (cplx& c : coeffs_) c *= s;
    return *this;
}

GridField to_grid(const SpectralField& f, int n) {
    require_grid(n, f.cutoff(), "to_grid");
    std::vector<cplx> work(static_cast<std::size_t>(n) * n, cplx(0.0, 0.0));
    const int K = f.cutoff();
    for (int k1 = -K; k1 <= K; ++k1) {
        const int a = (k1 + n) % n;
        for (int k2 = -K; k2 <= K; ++k2) {
            if (k1 == 0 && k2 == 0) continue;
            const int b = (k2 + n) % n;
            work[static_cast<std::size_t>(a) * n + b] = f.at(k1, k2);
        }
    }
    fft_2d(work, n, +1);  // synthesis: sum_k c_k e^{+i k.x}
    GridField g(n);
    for (std::size_t i = 0; i < work.size(); ++i) g.values[i] = work[i].real() / kTwoPi;
    return g;
}

SpectralField from_grid(const GridField& g, int cutoff) {
    const int n = g.n;
    if (cutoff > (n - 2) / 2)
        throw std::invalid_argument("from_grid: requires cutoff <= (n-2)/2");
    require_grid(n, cutoff, "from_grid");
    for (double v : g.values)
        if (!std::isfinite(v)) throw std::invalid_argument("from_grid: non-finite sample");

    std::vector<cplx> work(g.values.size());
    for (std::size_t i = 0; i < work.size(); ++i) work[i] = cplx(g.values[i], 0.0);
    fft_2d(work, n, -1);  // analysis: sum_x f(x) e^{-i k.x}

    // coeff(k) = <f, e_k> = (2pi/n^2) * DFT(k); mean mode forced to zero.
    const double scale = kTwoPi / (static_cast<double>(n) * n);
    SpectralField f(cutoff);
    for (int k1 = -cutoff; k1 <= cutoff; ++k1) {
        const int a = (k1 + n) % n;
        for (int k2 = -cutoff; k2 <= cutoff; ++k2) {
            if (k1 == 0 && k2 == 0) continue;
            const int b = (k2 + n) % n;
            f.at(k1, k2) = work[static_cast<std::size_t>(a) * n + b] * scale;
        }
    }
    return f;
}

SpectralField apply_A_power(const SpectralField& f, double b) {
    SpectralField out = f;
    out.transform_modes([&](int k1, int k2, cplx& c) {
        const double lam = static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2;
        c *= std::pow(lam, b);
    });
    return out;
}

double lp_norm(const GridField& g, double p) {
    if (p < 1.0) throw std::invalid_argument("lp_norm: requires p >= 1");
    const double h2 = (kTwoPi / g.n) * (kTwoPi / g.n);
    double acc = 0.0;
    const int ip = static_cast<int>(p);
    if (p == static_cast<double>(ip) && ip <= 16) {
        // |v|^p by repeated multiplication for small integer p.
        for (double v : g.values) {
            double m = std::abs(v), r = 1.0;
            for (int e = 0; e < ip; ++e) r *= m;
            acc += r;
        }
    } else {
        for (double v : g.values) acc += std::pow(std::abs(v), p);
    }
    return std::pow(h2 * acc, 1.0 / p);
}

int dealias_band(int cutoff) { return (2 * cutoff) / 3; }

SpectralField dealias(const SpectralField& f) {
    const int band = dealias_band(f.cutoff());
    SpectralField out = f;
    out.transform_modes([&](int k1, int k2, cplx& c) {
        if (std::max(std::abs(k1), std::abs(k2)) > band) c = cplx(0.0, 0.0);
    });
    return out;
}

double spectral_energy(const SpectralField& f) {
    double acc = 0.0;
    f.for_each_mode([&](int, int, const cplx& c) { acc += std::norm(c); });
    return acc;
}

}  // namespace vort
