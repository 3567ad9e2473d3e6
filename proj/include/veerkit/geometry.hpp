#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "veerkit/triangulation.hpp"
#include "veerkit/veering.hpp"

namespace veerkit {

using cplx = std::complex<double>;

// The three shape parameters of a tetrahedron with shape z, indexed by edge
// pair: z on 01/23, 1/(1-z) on 02/13, 1-1/z on 03/12.
cplx shape_param(cplx z, int pair);
// d/dz of log(shape_param(z, pair)).
cplx shape_param_dlog(cplx z, int pair);

struct ShapeAssignment {
    std::vector<cplx> z;
    // Per tetrahedron and edge pair: log is the principal log plus 2*pi*i*branch.
    std::vector<std::array<int, 3>> branch;

    static ShapeAssignment uniform(int n, cplx z);
    int size() const { return int(z.size()); }
};

enum class RowKind { Edge, Cusp };

// sum coeff[3t+p] * log(param p of tet t) = i*pi*target_pi
struct GluingRow {
    RowKind kind;
    int index;  // edge class, or 2*cusp + basis curve
    std::vector<int> coeff;
    int target_pi;
};

struct GluingSystem {
    int tets = 0;
    int cusps = 0;
    std::vector<GluingRow> rows;  // edge rows first, then two rows per cusp
    std::vector<int> square;      // rows used by Newton, one per unknown

    int edge_row_count() const;
};

GluingSystem assemble(const IdealTriangulation& tri);
GluingSystem assemble(const IdealTriangulation& tri, const std::vector<CuspCrossSection>& cusps);

// Row values (lhs - rhs) for every row.
std::vector<cplx> evaluate(const GluingSystem& sys, const ShapeAssignment& s);
// Euclidean norm of all row values.
double residual(const GluingSystem& sys, const ShapeAssignment& s);
// Same with each row's imaginary part reduced mod 2*pi, i.e. the residual of
// the exponentiated (polynomial) equations.  Transported shapes satisfy these
// but can wind differently around a new edge.
double polynomial_residual(const GluingSystem& sys, const ShapeAssignment& s);

struct SolveOptions {
    std::uint64_t seed = 0;
    int random_restarts = 10;
    int max_iterations = 100;
    double tolerance = 1e-12;
    double guard = 1e-8;
};

// Integer branches that make every log row vanish, for shapes solving the
// exponentiated equations.  nullopt when no integer solution exists.
std::optional<ShapeAssignment> fit_branches(const GluingSystem& sys, const ShapeAssignment& s);

// Newton on the log form with the given branches, with restarts around
// exp(i pi / 3).  If none converges, the exponentiated equations are solved
// from both half planes, branches fitted, and the largest-volume solution
// returned.
ShapeAssignment solve(const GluingSystem& sys, const std::optional<ShapeAssignment>& initial = std::nullopt,
                      const SolveOptions& opt = {});

enum class Verdict { Geometric, NonGeometric, ContainsFlat };

struct Classification {
    Verdict verdict;
    std::vector<int> negative;  // Im z < -tol
    std::vector<int> flat;      // |Im z| <= tol
};

// NonGeometric wins over ContainsFlat when both kinds are present.
Classification classify(const ShapeAssignment& s, double tol);
std::string verdict_name(Verdict v);

double bloch_wigner(cplx z);
double volume(const ShapeAssignment& s);

// Shape transport along a Pachner move.  `before` and `after` are the
// triangulations on either side of `move`.
ShapeAssignment transport_23(const ShapeAssignment& s, const PachnerMove& move, const IdealTriangulation& before,
                             const IdealTriangulation& after);
ShapeAssignment transport_32(const ShapeAssignment& s, const PachnerMove& move, const IdealTriangulation& before,
                             const IdealTriangulation& after);
ShapeAssignment transport(const ShapeAssignment& s, const PachnerMove& move, const IdealTriangulation& before,
                          const IdealTriangulation& after);

constexpr double kMoveGuard = 1e-10;

}  // namespace veerkit
