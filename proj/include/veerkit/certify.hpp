#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "veerkit/geometry.hpp"
#include "veerkit/interval.hpp"
#include "veerkit/triangulation.hpp"

namespace veerkit {

struct BoxAssignment {
    std::vector<ComplexBox> boxes;  // one per tetrahedron
    bool unique = false;            // Krawczyk contraction holds on these boxes
};

// Krawczyk is run on the exponentiated equations of the square subsystem,
//   prod z^A (1-z)^B = +-1,
// which need only + - * /.  Afterwards every row (square or dropped) is
// checked in log form over the boxes with principal logarithms, which pins
// the winding to the row's target.
//
// Boxes are square with a power-of-two radius: re and im widths are equal
// and exact.  Throws VerificationFailed when the approximate log residual
// exceeds 1e-8 or no radius in the ladder inflation * 2^k (up to 1e-5)
// contracts.  Boxes meeting the real axis also fail.
BoxAssignment krawczyk_verify(const GluingSystem& sys, const ShapeAssignment& approx, double inflation = 1e-13);
std::optional<BoxAssignment> try_krawczyk(const GluingSystem& sys, const ShapeAssignment& approx,
                                          double inflation = 1e-13);

// K(X) strictly inside X for the square subsystem, with x~ the midpoints.
bool krawczyk_contracts(const GluingSystem& sys, const std::vector<ComplexBox>& X);
// Every row of the log form contains its target over X.
bool log_rows_hold(const GluingSystem& sys, const std::vector<ComplexBox>& X);

enum class CertVerdict { GeometricCertified, NonGeometricCertified };
std::string cert_verdict_name(CertVerdict v);

struct MoveRecord {
    MoveKind kind;
    int target;  // 4*tet+face for 2-3, edge class for 3-2
};
PachnerResult apply_move(const IdealTriangulation& tri, const MoveRecord& m);

// steps[i+1] = apply_move(steps[i], moves[i]).tri, boxes[i] for steps[i].
struct Certificate {
    std::vector<IdealTriangulation> steps;
    std::vector<MoveRecord> moves;
    std::vector<BoxAssignment> boxes;
    CertVerdict verdict = CertVerdict::GeometricCertified;
    std::uint64_t seed = 0;
    std::string version;
};

struct SearchBudget {
    int max_length = 24;     // moves per walk
    int restarts = 10000;    // walks
    double greedy = 0.75;    // chance of a move next to a negative tetrahedron
    double inflation = 1e-13;
    std::optional<ShapeAssignment> initial;  // solution on the input; solved if absent
};

struct PachnerPath {
    std::vector<IdealTriangulation> steps;
    std::vector<MoveRecord> moves;
    std::vector<ShapeAssignment> shapes;  // floating transported shapes per step
};

struct GeometricPath {
    PachnerPath path;
    Certificate final_step;  // certify_geometric of the last step
};

// Inputs that are not positively labelled are replaced by oriented_copy; the
// certificate records the copy.  Throws NotCertified.
Certificate certify_geometric(const IdealTriangulation& tri, const SolveOptions& opt = {});
Certificate certify_geometric(const IdealTriangulation& tri, const ShapeAssignment& approx, double inflation = 1e-13);

// Random walk of 2-3 / 3-2 moves biased towards negatively oriented
// tetrahedra.  Deterministic given the seed.  Throws BudgetExhausted.
GeometricPath find_geometric_path(const IdealTriangulation& tri, const SearchBudget& budget, std::uint64_t seed);

// Throws BudgetExhausted, TransportDegenerate, NotNonGeometric.
Certificate certify_nongeometric(const IdealTriangulation& tri, const SearchBudget& budget, std::uint64_t seed);

// Boxes on `before` from boxes on apply_move(before, m).tri by interval
// cross ratios of the bipyramid placed from the new tetrahedra.
std::vector<ComplexBox> transport_back(const IdealTriangulation& before, const MoveRecord& m,
                                       const std::vector<ComplexBox>& after);
std::vector<ComplexBox> transport_back(const PachnerResult& r, const std::vector<ComplexBox>& after);

struct CheckReport {
    bool ok = false;
    int step = -1;  // offending step, -1 for whole-certificate failures
    std::string reason;
    explicit operator bool() const { return ok; }
};

CheckReport check_certificate(const Certificate& cert);

// Enclosure of the summed Bloch-Wigner volume over the boxes.  Midpoint value
// plus a gradient bound times the radius, plus 1e-12 for the floating
// evaluation at the midpoint.
Interval interval_volume(const std::vector<ComplexBox>& boxes);

void write_certificate(std::ostream& out, const Certificate& cert);
// Throws InvalidInput on malformed input.
Certificate read_certificate(std::istream& in);

extern const char* const kVersion;

}  // namespace veerkit
