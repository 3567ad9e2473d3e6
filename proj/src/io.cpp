#include "veerkit/io.hpp"

#include <fstream>
#include <istream>

namespace veerkit {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::InvalidInput, what); }

long long parse_decimal(const json& j) {
    if (j.is_number_integer()) return j.get<long long>();
    if (!j.is_string()) bad("expected a decimal integer string");
    const std::string s = j.get<std::string>();
    size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(s, &used);
    } catch (const std::exception&) {
        bad("not a decimal integer: " + s);
    }
    if (used != s.size()) bad("not a decimal integer: " + s);
    return v;
}

std::string dec(long long v) { return std::to_string(v); }

}  // namespace

json triangulation_json(const IdealTriangulation& tri, const std::optional<VeeringStructure>& veering) {
    json g = json::array();
    for (int t = 0; t < tri.tet_count(); ++t) {
        json faces = json::array();
        for (int f = 0; f < 4; ++f) {
            const FaceGluing& fg = tri.gluing(t, f);
            faces.push_back(json::array({fg.tet, fg.face, {fg.perm[0], fg.perm[1], fg.perm[2], fg.perm[3]}}));
        }
        g.push_back(faces);
    }
    json out = {{"tet_count", tri.tet_count()}, {"gluings", g}};
    if (veering) {
        json colors = json::array();
        for (Color c : veering->colors) colors.push_back(c == Color::Red ? "red" : "blue");
        out["veering"] = {{"pi_pair", veering->taut.pi_pair}, {"top_edge", veering->taut.top_edge}, {"colors", colors}};
    }
    return out;
}

TriangulationFile triangulation_from_json(const json& j) {
    GluingData raw;
    try {
        const int n = j.at("tet_count").get<int>();
        const json& g = j.at("gluings");
        if (n <= 0 || !g.is_array() || int(g.size()) != n) bad("gluings must list tet_count tetrahedra");
        raw.resize(n);
        for (int t = 0; t < n; ++t) {
            if (!g[t].is_array() || g[t].size() != 4) bad("each tetrahedron needs four faces");
            for (int f = 0; f < 4; ++f) {
                const json& e = g[t][f];
                if (!e.is_array() || e.size() != 3 || !e[2].is_array() || e[2].size() != 4) bad("face entry is [t, f, perm]");
                std::array<int, 4> img{};
                for (int k = 0; k < 4; ++k) img[k] = e[2][k].get<int>();
                if (!Perm4::valid(img)) throw Error(ErrorKind::InvalidPermutation, "gluing permutation is not a bijection");
                raw[t][f] = {e[0].get<int>(), e[1].get<int>(), Perm4(img[0], img[1], img[2], img[3])};
            }
        }
    } catch (const json::exception& e) {
        bad(std::string("triangulation JSON: ") + e.what());
    }
    TriangulationFile out{IdealTriangulation::from_gluing_data(raw), std::nullopt};
    if (j.contains("veering")) {
        VeeringStructure v;
        try {
            const json& vj = j.at("veering");
            v.taut.pi_pair = vj.at("pi_pair").get<std::vector<int>>();
            v.taut.top_edge = vj.at("top_edge").get<std::vector<int>>();
            for (const json& c : vj.at("colors")) {
                std::string s = c.get<std::string>();
                if (s != "red" && s != "blue") bad("colour must be red or blue");
                v.colors.push_back(s == "red" ? Color::Red : Color::Blue);
            }
        } catch (const json::exception& e) {
            bad(std::string("veering JSON: ") + e.what());
        }
        const int n = out.tri.tet_count();
        if (int(v.taut.pi_pair.size()) != n || int(v.taut.top_edge.size()) != n ||
            int(v.colors.size()) != out.tri.edge_count())
            bad("veering arrays have the wrong length");
        for (int t = 0; t < n; ++t)
            if (v.taut.pi_pair[t] < 0 || v.taut.pi_pair[t] > 2 || v.taut.top_edge[t] < 0 || v.taut.top_edge[t] > 5 ||
                edge_pair(v.taut.top_edge[t]) != v.taut.pi_pair[t])
                bad("veering entry out of range at tetrahedron " + std::to_string(t));
        if (!is_veering(out.tri, v)) bad("the veering key is not a veering structure");
        out.veering = v;
    }
    return out;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) bad("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        bad(path + ": " + e.what());
    }
}

TriangulationFile read_triangulation(std::istream& in) {
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        bad(std::string("triangulation JSON: ") + e.what());
    }
    return triangulation_from_json(j);
}

TriangulationFile read_triangulation_file(const std::string& path) { return triangulation_from_json(read_json_file(path)); }

namespace {

json vertex_json(const FaceVertex& v) {
    json cusps = json::array();
    for (const auto& terms : v.boundary) {
        json c = json::array();
        for (const WeightedSlope& w : terms) c.push_back({dec(w.multiplicity), dec(w.slope.p), dec(w.slope.q)});
        cusps.push_back(c);
    }
    return {{"norm", dec(v.norm)}, {"boundary", cusps}};
}

FaceVertex vertex_from_json(const json& j) {
    FaceVertex v;
    v.norm = parse_decimal(j.at("norm"));
    for (const json& c : j.at("boundary")) {
        std::vector<WeightedSlope> terms;
        for (const json& w : c) {
            if (!w.is_array() || w.size() != 3) bad("boundary term is [mult, p, q]");
            terms.push_back({parse_decimal(w[0]), {parse_decimal(w[1]), parse_decimal(w[2])}});
        }
        v.boundary.push_back(terms);
    }
    return v;
}

}  // namespace

json face_data_json(const FaceData& f) { return {{"v1", vertex_json(f.v1)}, {"v2", vertex_json(f.v2)}}; }

FaceData face_data_from_json(const json& j) {
    FaceData f;
    try {
        f.v1 = vertex_from_json(j.at("v1"));
        f.v2 = vertex_from_json(j.at("v2"));
    } catch (const json::exception& e) {
        bad(std::string("face data JSON: ") + e.what());
    }
    if (f.v1.norm <= 0 || f.v2.norm <= 0) bad("vertex norms must be positive");
    if (f.v1.boundary.size() != f.v2.boundary.size()) bad("both vertices need the same cusp count");
    return f;
}

FaceData read_face_data_file(const std::string& path) { return face_data_from_json(read_json_file(path)); }

json matrix_json(const IntegerMatrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json r = json::array();
        for (int k = 0; k < m.cols(); ++k) r.push_back(m(i, k).str());
        rows.push_back(r);
    }
    return rows;
}

IntegerMatrix matrix_from_json(const json& j) {
    if (!j.is_array()) bad("matrix must be an array of rows");
    const int rows = int(j.size());
    const int cols = rows ? int(j[0].size()) : 0;
    IntegerMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        if (!j[i].is_array() || int(j[i].size()) != cols) bad("ragged matrix");
        for (int k = 0; k < cols; ++k) {
            if (!j[i][k].is_string()) bad("matrix entries are decimal strings");
            try {
                m(i, k) = BigInt(j[i][k].get<std::string>());
            } catch (const std::exception&) {
                bad("not a decimal integer: " + j[i][k].get<std::string>());
            }
        }
    }
    return m;
}

}  // namespace veerkit
