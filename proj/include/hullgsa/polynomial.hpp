#pragma once

#include <initializer_list>
#include <vector>

namespace hullgsa {

/// Dense univariate polynomial, coefficients in ascending powers.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<double> coeffs);
    Polynomial(std::initializer_list<double> coeffs);

    const std::vector<double>& coeffs() const noexcept { return coeffs_; }
    int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    double coeff(int power) const noexcept;

    double operator()(double x) const noexcept;

    Polynomial derivative() const;
    /// Antiderivative vanishing at 0.
    Polynomial antiderivative() const;
    double integrate(double a, double b) const;

    /// p(scale * x + shift)
    Polynomial compose_affine(double scale, double shift) const;

    Polynomial& operator+=(const Polynomial& rhs);
    Polynomial& operator-=(const Polynomial& rhs);
    Polynomial& operator*=(double s);

    friend Polynomial operator+(Polynomial lhs, const Polynomial& rhs) { return lhs += rhs; }
    friend Polynomial operator-(Polynomial lhs, const Polynomial& rhs) { return lhs -= rhs; }
    friend Polynomial operator*(Polynomial lhs, double s) { return lhs *= s; }
    friend Polynomial operator*(double s, Polynomial rhs) { return rhs *= s; }
    friend Polynomial operator*(const Polynomial& lhs, const Polynomial& rhs);

    Polynomial pow(int n) const;

private:
    void trim();

    std::vector<double> coeffs_;
};

} // namespace hullgsa
