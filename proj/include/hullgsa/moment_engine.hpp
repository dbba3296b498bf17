#pragma once

#include <cstdint>
#include <iosfwd>
#include <unordered_map>
#include <vector>

#include "hullgsa/hull_modeller.hpp"

namespace hullgsa {

struct MomentIndex {
    int p = 0;
    int q = 0;
    int r = 0;

    int order() const noexcept { return p + q + r; }
    void validate() const;
    friend bool operator==(const MomentIndex&, const MomentIndex&) = default;
};

enum class MomentKind { Raw, Translated, Scaled, Invariant };

struct MomentValue {
    MomentKind kind = MomentKind::Raw;
    MomentIndex index;
    double value = 0.0;
};

/// Exponent used to normalize translated moments by the volume.
///   Printed:  M_T / V^((s+1)/3)
///   Standard: M_T / V^((s+3)/3), the dimensionless variant
enum class InvariantExponent { Printed, Standard };

/// Closed-form moments of one hull, memoizing the one-dimensional factor integrals
/// so that many indices of the same design share work. Not thread-safe; use one
/// instance per thread.
class MomentEvaluator {
public:
    explicit MomentEvaluator(const HullParams& params);

    const HullParams& params() const noexcept { return params_; }

    double raw(const MomentIndex& idx);
    /// Moment about the centroid (C_x = C_y = 0 by symmetry, C_z from M(0,0,1)).
    double translated(const MomentIndex& idx);
    double invariant(const MomentIndex& idx, InvariantExponent exponent = InvariantExponent::Printed);

    double volume();
    double centroid_z();

private:
    long double sum_over_c3(int p, int q, int r, bool about_centroid);
    long double x_factor(int p, int big_q, int i1);
    long double z_factor(int a, int i1, int m);
    long double z_factor_translated(int r, int i1, int m);

    HullParams params_;
    long double cz_ratio_ = -1.0L; // C_z / T, computed on first use
    std::unordered_map<std::uint64_t, long double> x_memo_;
    std::unordered_map<std::uint64_t, long double> z_memo_;
    std::unordered_map<std::uint64_t, long double> zt_memo_;
};

MomentValue closed_form_moment(const HullParams& params, const MomentIndex& idx);
MomentValue translated_moment(const HullParams& params, const MomentIndex& idx);
MomentValue invariant_moment(const HullParams& params, const MomentIndex& idx,
                             InvariantExponent exponent = InvariantExponent::Printed);

/// All raw moments of a closed mesh with p+q+r <= max_order, indexed by moment_slot().
/// Each volume integral is turned into a surface integral of x^(p+1)/(p+1) n_x and
/// integrated exactly per triangle.
std::vector<double> mesh_moments(const TriangleMesh& mesh, int max_order);
/// Position of (p,q,r) in the mesh_moments() vector: orders ascending,
/// lexicographic within an order.
std::size_t moment_slot(const MomentIndex& idx);

/// Raw moment of a closed, outward-oriented mesh. Throws DomainError if the mesh
/// encloses non-positive volume (open or inverted).
MomentValue mesh_moment(const TriangleMesh& mesh, const MomentIndex& idx);
/// Moment about the mesh's own centroid.
MomentValue mesh_translated_moment(const TriangleMesh& mesh, const MomentIndex& idx);

/// Scale used for "vanishing" tests: L^(p+1) B^(q+1) T^(r+1).
double moment_scale(const HullParams& params, const MomentIndex& idx);

struct SSVector {
    int order = 0;
    std::vector<MomentIndex> indices;
    std::vector<double> entries;
};

/// Indices of orders 0 and 2..N; ascending lexicographic (p,q,r) within an order.
std::vector<MomentIndex> ssv_indices(int N);
/// N^3/6 + N^2 + 11N/6 - 2.
long long ssv_cardinality(int N);

SSVector ssv(const HullParams& params, int N, InvariantExponent exponent = InvariantExponent::Printed);

/// CSV with header `p,q,r,value`.
void write_ssv_csv(const SSVector& v, std::ostream& out);

} // namespace hullgsa
