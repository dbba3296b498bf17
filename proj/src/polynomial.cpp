#include "hullgsa/polynomial.hpp"

#include <algorithm>

#include "hullgsa/numerics.hpp"

namespace hullgsa {

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
    trim();
}

Polynomial::Polynomial(std::initializer_list<double> coeffs) : coeffs_(coeffs) {
    trim();
}

void Polynomial::trim() {
    while (coeffs_.size() > 1 && coeffs_.back() == 0.0) {
        coeffs_.pop_back();
    }
    if (coeffs_.empty()) {
        coeffs_.push_back(0.0);
    }
}

double Polynomial::coeff(int power) const noexcept {
    if (power < 0 || power >= static_cast<int>(coeffs_.size())) {
        return 0.0;
    }
    return coeffs_[power];
}

double Polynomial::operator()(double x) const noexcept {
    double r = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        r = r * x + *it;
    }
    return r;
}

Polynomial Polynomial::derivative() const {
    if (coeffs_.size() <= 1) {
        return Polynomial{0.0};
    }
    std::vector<double> d(coeffs_.size() - 1);
    for (std::size_t i = 1; i < coeffs_.size(); ++i) {
        d[i - 1] = static_cast<double>(i) * coeffs_[i];
    }
    return Polynomial(std::move(d));
}

Polynomial Polynomial::antiderivative() const {
    std::vector<double> a(coeffs_.size() + 1, 0.0);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        a[i + 1] = coeffs_[i] / static_cast<double>(i + 1);
    }
    return Polynomial(std::move(a));
}

double Polynomial::integrate(double a, double b) const {
    const Polynomial anti = antiderivative();
    return anti(b) - anti(a);
}

Polynomial Polynomial::compose_affine(double scale, double shift) const {
    // sum_i c_i (scale x + shift)^i, expanded binomially
    std::vector<double> out(coeffs_.size(), 0.0);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i] == 0.0) {
            continue;
        }
        double sp = 1.0;
        for (std::size_t j = 0; j <= i; ++j) {
            // term C(i, j) scale^j shift^(i-j) x^j
            double shift_pow = 1.0;
            for (std::size_t m = 0; m < i - j; ++m) {
                shift_pow *= shift;
            }
            out[j] += coeffs_[i] * binomial(static_cast<int>(i), static_cast<int>(j)) * sp * shift_pow;
            sp *= scale;
        }
    }
    return Polynomial(std::move(out));
}

Polynomial& Polynomial::operator+=(const Polynomial& rhs) {
    if (rhs.coeffs_.size() > coeffs_.size()) {
        coeffs_.resize(rhs.coeffs_.size(), 0.0);
    }
    for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) {
        coeffs_[i] += rhs.coeffs_[i];
    }
    trim();
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& rhs) {
    if (rhs.coeffs_.size() > coeffs_.size()) {
        coeffs_.resize(rhs.coeffs_.size(), 0.0);
    }
    for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) {
        coeffs_[i] -= rhs.coeffs_[i];
    }
    trim();
    return *this;
}

Polynomial& Polynomial::operator*=(double s) {
    for (double& c : coeffs_) {
        c *= s;
    }
    trim();
    return *this;
}

Polynomial operator*(const Polynomial& lhs, const Polynomial& rhs) {
    std::vector<double> out(lhs.coeffs_.size() + rhs.coeffs_.size() - 1, 0.0);
    for (std::size_t i = 0; i < lhs.coeffs_.size(); ++i) {
        for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j) {
            out[i + j] += lhs.coeffs_[i] * rhs.coeffs_[j];
        }
    }
    return Polynomial(std::move(out));
}

Polynomial Polynomial::pow(int n) const {
    Polynomial r{1.0};
    for (int i = 0; i < n; ++i) {
        r = r * *this;
    }
    return r;
}

} // namespace hullgsa
