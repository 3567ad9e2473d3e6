#pragma once

#include <iosfwd>
#include <json.hpp>
#include <optional>
#include <string>

#include "veerkit/homology.hpp"
#include "veerkit/triangulation.hpp"
#include "veerkit/veering.hpp"

namespace veerkit {

// {"tet_count": n, "gluings": [[[t', f', [p0,p1,p2,p3]] x 4] x n],
//  "veering": {"pi_pair": [...], "top_edge": [...], "colors": ["red"|"blue", ...]}}
// The veering key is optional.
nlohmann::json triangulation_json(const IdealTriangulation& tri,
                                  const std::optional<VeeringStructure>& veering = std::nullopt);

struct TriangulationFile {
    IdealTriangulation tri;
    std::optional<VeeringStructure> veering;
};

// Throws InvalidInput for malformed JSON and the triangulation's own errors
// for bad gluings.  A veering key that fails is_veering is InvalidInput.
TriangulationFile triangulation_from_json(const nlohmann::json& j);
TriangulationFile read_triangulation(std::istream& in);
TriangulationFile read_triangulation_file(const std::string& path);

// {"v1": {"norm": "1", "boundary": [[["mult", "p", "q"], ...] per cusp]}, "v2": ...}
// with every integer a decimal string.
nlohmann::json face_data_json(const FaceData& f);
FaceData face_data_from_json(const nlohmann::json& j);
FaceData read_face_data_file(const std::string& path);

nlohmann::json matrix_json(const IntegerMatrix& m);
IntegerMatrix matrix_from_json(const nlohmann::json& j);

nlohmann::json read_json_file(const std::string& path);

}  // namespace veerkit
