#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

// Nonnegative-coefficient polynomial in the redundancy-weight dummy variable
// Y: the arithmetic object of every enumerator computation. Coefficients are
// doubles in the linear domain; at the scales this library supports
// (K*L <= 600, T <= 60) all magnitudes stay far below the double range.

namespace bmstr {

class WeightPoly {
  public:
    WeightPoly() = default;
    explicit WeightPoly(std::vector<double> coeffs) : c_(std::move(coeffs)) { trim(); }

    static WeightPoly monomial(int degree, double coeff = 1.0) {
        std::vector<double> c(static_cast<std::size_t>(degree) + 1, 0.0);
        c.back() = coeff;
        return WeightPoly(std::move(c));
    }
    static WeightPoly one() { return monomial(0, 1.0); }

    bool empty() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    double at(int j) const {
        return (j >= 0 && j < static_cast<int>(c_.size())) ? c_[static_cast<std::size_t>(j)] : 0.0;
    }
    const std::vector<double>& coeffs() const { return c_; }
    std::vector<double>& coeffs() { return c_; }

    // Value at Y = 1.
    double sum() const {
        double s = 0.0;
        for (double v : c_) s += v;
        return s;
    }

    WeightPoly& operator+=(const WeightPoly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
        for (std::size_t j = 0; j < o.c_.size(); ++j) c_[j] += o.c_[j];
        return *this;
    }

    WeightPoly& scale(double s) {
        for (double& v : c_) v *= s;
        return *this;
    }

    // this += s * (a * b), degrees above cap dropped (cap < 0 keeps all).
    // Dropping is sound for the enumerator recursions: coefficients never
    // feed back into lower degrees.
    void add_scaled_product(const WeightPoly& a, const WeightPoly& b, double s, int cap = -1) {
        if (a.empty() || b.empty() || s == 0.0) return;
        int deg = a.degree() + b.degree();
        if (cap >= 0 && deg > cap) deg = cap;
        if (deg + 1 > static_cast<int>(c_.size())) c_.resize(static_cast<std::size_t>(deg) + 1, 0.0);
        for (int ja = 0; ja <= a.degree(); ++ja) {
            const double av = a.c_[static_cast<std::size_t>(ja)] * s;
            if (av == 0.0) continue;
            const int jb_max = std::min(b.degree(), deg - ja);
            double* out = c_.data() + ja;
            const double* bc = b.c_.data();
            for (int jb = 0; jb <= jb_max; ++jb) out[jb] += av * bc[jb];
        }
    }

    void truncate(int cap) {
        if (cap >= 0 && static_cast<int>(c_.size()) > cap + 1) c_.resize(static_cast<std::size_t>(cap) + 1);
        trim();
    }

    friend WeightPoly operator*(const WeightPoly& a, const WeightPoly& b) {
        WeightPoly r;
        r.add_scaled_product(a, b, 1.0);
        return r;
    }

    WeightPoly pow(int e, int cap = -1) const {
        if (e < 0) throw std::invalid_argument("WeightPoly::pow: negative exponent");
        WeightPoly r = one();
        for (int i = 0; i < e; ++i) {
            WeightPoly next;
            next.add_scaled_product(r, *this, 1.0, cap);
            r = std::move(next);
        }
        return r;
    }

  private:
    void trim() {
        while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
    }
    std::vector<double> c_;
};

}  // namespace bmstr
