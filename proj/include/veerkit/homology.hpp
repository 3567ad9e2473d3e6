#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>
#include <vector>

#include "veerkit/triangulation.hpp"

namespace veerkit {

using BigInt = boost::multiprecision::cpp_int;

class IntegerMatrix {
public:
    IntegerMatrix() = default;
    IntegerMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(size_t(rows) * cols) {}
    static IntegerMatrix identity(int n);
    static IntegerMatrix from_rows(const std::vector<std::vector<long long>>& rows);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    BigInt& operator()(int i, int j) { return a_[size_t(i) * cols_ + j]; }
    const BigInt& operator()(int i, int j) const { return a_[size_t(i) * cols_ + j]; }

    IntegerMatrix operator*(const IntegerMatrix& o) const;
    bool operator==(const IntegerMatrix& o) const;
    IntegerMatrix transpose() const;
    bool is_zero() const;

    // Exact determinant by fraction-free elimination (square only).
    BigInt determinant() const;

private:
    int rows_ = 0, cols_ = 0;
    std::vector<BigInt> a_;
};

struct SmithForm {
    IntegerMatrix U, S, V;  // U * A * V = S
    int rank = 0;
    std::vector<BigInt> invariants;  // nonzero diagonal of S, d_i | d_{i+1}
};

SmithForm smith_normal_form(const IntegerMatrix& A);

// Boundary maps of the cellular chain complex dual to the triangulation:
// 0-cells tets, 1-cells faces (oriented from the lower slot), 2-cells edge classes.
IntegerMatrix dual_boundary_1(const IdealTriangulation& tri);
IntegerMatrix dual_boundary_2(const IdealTriangulation& tri);
// Canonical face index of slot (tet, face) and its sign (+1 for the lower slot).
std::pair<int, int> dual_face(const IdealTriangulation& tri, int tet, int face);

struct HomologyGroups {
    int betti_1 = 0;
    std::vector<BigInt> torsion;  // invariant factors > 1 of H_1(M)
    int rank_h2_rel = 0;          // rank of H_2(M, dM)
    std::string describe() const;
};

HomologyGroups homology_groups(const IdealTriangulation& tri);

struct Slope {
    long long p = 0, q = 0;
    bool operator==(const Slope& o) const { return p == o.p && q == o.q; }
};

// Primitive representative with sign normalized (p > 0, or p == 0 and q > 0).
Slope normalize_slope(long long p, long long q);

struct WeightedSlope {
    long long multiplicity;
    Slope slope;
};

struct SlopeSumResult {
    long long p = 0, q = 0;        // homology class
    long long components = 0;      // gcd(|p|,|q|), 0 for the zero class
    Slope slope;                   // primitive direction (0,0 if class is zero)
};

SlopeSumResult slope_sum(const std::vector<WeightedSlope>& terms);

long long intersection_number(const Slope& a, const Slope& b);

struct FaceVertex {
    long long norm = 0;
    std::vector<std::vector<WeightedSlope>> boundary;  // per cusp
};

struct FaceData {
    FaceVertex v1, v2;
    int cusp_count() const { return int(v1.boundary.size()); }
};

struct FiberType {
    long long genus = 0;
    long long punctures = 0;
    long long norm = 0;
    std::vector<SlopeSumResult> boundary;  // per cusp
};

FiberType fiber_type(const FaceData& face, long long a, long long b);

}  // namespace veerkit
