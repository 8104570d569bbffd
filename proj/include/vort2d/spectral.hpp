#pragma once

// Torus geometry and Fourier representation for zero-mean real scalar
// fields on D = [0,2pi]^2.
//
// Convention: f(x) = sum_k coeff(k) e_k(x) with e_k(x) = exp(i k.x)/(2pi),
// so the e_k are orthonormal in L^2(D) and Parseval reads
// ||f||_{L^2}^2 = sum_k |coeff(k)|^2. Real fields have Hermitian-symmetric
// coefficients, coeff(-k) = conj(coeff(k)), and coeff(0,0) = 0 (zero mean).

#include <complex>
#include <cstdint>
#include <vector>

namespace vort {

using cplx = std::complex<double>;

inline constexpr double kTwoPi = 6.283185307179586476925287;

struct WaveVector {
    int k1 = 0;
    int k2 = 0;

    int norm2() const { return k1 * k1 + k2 * k2; }
    WaveVector perp() const { return {-k2, k1}; }
    bool is_zero() const { return k1 == 0 && k2 == 0; }
    bool operator==(const WaveVector& o) const { return k1 == o.k1 && k2 == o.k2; }
};

// Positive half-lattice Z^2_+ = {k1>0} u {k1=0, k2>0}; one representative
// per Hermitian pair.
inline bool in_positive_half(const WaveVector& k) {
    return k.k1 > 0 || (k.k1 == 0 && k.k2 > 0);
}

// Dense square block of modes |k1|,|k2| <= cutoff.
class SpectralField {
  public:
    SpectralField() = default;
    explicit SpectralField(int cutoff)
        : cutoff_(cutoff), side_(2 * cutoff + 1),
          coeffs_(static_cast<std::size_t>(side_) * side_, cplx(0.0, 0.0)) {}

    int cutoff() const { return cutoff_; }
    bool contains(int k1, int k2) const {
        return k1 >= -cutoff_ && k1 <= cutoff_ && k2 >= -cutoff_ && k2 <= cutoff_;
    }

    const cplx& at(int k1, int k2) const { return coeffs_[index(k1, k2)]; }
    cplx& at(int k1, int k2) { return coeffs_[index(k1, k2)]; }
    const cplx& at(const WaveVector& k) const { return at(k.k1, k.k2); }
    cplx& at(const WaveVector& k) { return at(k.k1, k.k2); }

    // Sets the pair (k, -k) so Hermitian symmetry holds by construction.
    void set_pair(int k1, int k2, cplx value) {
        at(k1, k2) = value;
        at(-k1, -k2) = std::conj(value);
    }

    const std::vector<cplx>& raw() const { return coeffs_; }
    std::vector<cplx>& raw() { return coeffs_; }

    // Iterates all nonzero-mode slots (k = 0 excluded).
    template <typename F>
    void for_each_mode(F&& f) const {
        for (int k1 = -cutoff_; k1 <= cutoff_; ++k1)
            for (int k2 = -cutoff_; k2 <= cutoff_; ++k2)
                if (k1 != 0 || k2 != 0) f(k1, k2, at(k1, k2));
    }
    template <typename F>
    void transform_modes(F&& f) {
        for (int k1 = -cutoff_; k1 <= cutoff_; ++k1)
            for (int k2 = -cutoff_; k2 <= cutoff_; ++k2)
                if (k1 != 0 || k2 != 0) f(k1, k2, at(k1, k2));
    }

    double max_hermitian_defect() const;
    double max_abs() const;
    // f(x) = sum_k coeff(k) e^{ik.x} / (2pi); returns the real part and
    // asserts the imaginary residue is round-off sized.
    double point_value(double x1, double x2) const;

    SpectralField& operator+=(const SpectralField& o);
    SpectralField& operator-=(const SpectralField& o);
    SpectralField& operator*=(double s);

  private:
    std::size_t index(int k1, int k2) const {
        return static_cast<std::size_t>(k1 + cutoff_) * side_ +
               static_cast<std::size_t>(k2 + cutoff_);
    }

    int cutoff_ = 0;
    int side_ = 1;
    std::vector<cplx> coeffs_{cplx(0.0, 0.0)};
};

// Real samples on the uniform grid x_ab = (2pi a/n, 2pi b/n), row-major in a.
struct GridField {
    int n = 0;
    std::vector<double> values;

    GridField() = default;
    explicit GridField(int n_) : n(n_), values(static_cast<std::size_t>(n_) * n_, 0.0) {}

    double& at(int a, int b) { return values[static_cast<std::size_t>(a) * n + b]; }
    double at(int a, int b) const { return values[static_cast<std::size_t>(a) * n + b]; }
};

struct VectorSpectralField {
    SpectralField u1, u2;
};

struct VectorGridField {
    GridField u1, u2;
};

// --- Transforms -----------------------------------------------------------
// Backend: deterministic iterative radix-2 FFT; n must be a power of two
// and satisfy n >= 2*cutoff + 2 (no aliasing of represented modes).

bool is_power_of_two(int n);
int next_power_of_two(int n);

GridField to_grid(const SpectralField& f, int n);
SpectralField from_grid(const GridField& g, int cutoff);

// --- Operations -----------------------------------------------------------

// A^b with A = -Laplacian: coeff(k) *= |k|^{2b}.
SpectralField apply_A_power(const SpectralField& f, double b);

// ((2pi/n)^2 sum |v|^p)^{1/p}; requires p >= 1.
double lp_norm(const GridField& g, double p);

// 2/3-rule: zero modes with max(|k1|,|k2|) > floor(2*cutoff/3).
SpectralField dealias(const SpectralField& f);
int dealias_band(int cutoff);

// sum_k |coeff(k)|^2 (equals ||f||_{L^2}^2 by Parseval).
double spectral_energy(const SpectralField& f);

}  // namespace vort
