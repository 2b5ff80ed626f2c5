#include "morphkit/mesh_io.hpp"

#include "morphkit/error.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace morphkit {

using nlohmann::json;

MeshFormat parse_mesh_format(std::string_view name) {
    if (name == "json" || name == "native-json") return MeshFormat::NativeJson;
    if (name == "vtk" || name == "vtk-legacy-ascii") return MeshFormat::VtkLegacy;
    fail(ErrorCode::InvalidArgument, "unknown mesh format '" + std::string(name) + "'");
}

namespace {

const json& field(const json& doc, const char* key) {
    if (!doc.is_object() || !doc.contains(key))
        fail(ErrorCode::Parse, std::string("missing field '") + key + "'");
    return doc.at(key);
}

template <class T>
T as(const json& v, const std::string& where) {
    try {
        return v.get<T>();
    } catch (const json::exception& e) {
        fail(ErrorCode::Parse, where + ": " + e.what());
    }
}

Point point_from_json(const json& v, int dim, const std::string& where) {
    if (!v.is_array() || static_cast<int>(v.size()) != dim)
        fail(ErrorCode::Parse, where + ": expected " + std::to_string(dim) + " coordinates");
    Point p = Point::Zero();
    for (int c = 0; c < dim; ++c) p(c) = as<double>(v[c], where);
    return p;
}

} // namespace

json mesh_to_json(const Mesh& mesh) {
    const int dim = mesh.dim();
    json nodes = json::array();
    for (const Point& p : mesh.nodes()) {
        json row = json::array();
        for (int c = 0; c < dim; ++c) row.push_back(p(c));
        nodes.push_back(std::move(row));
    }
    json elements = json::array();
    for (std::size_t e = 0; e < mesh.element_count(); ++e) {
        auto el = mesh.element(e);
        elements.push_back(std::vector<NodeId>(el.begin(), el.end()));
    }
    json groups = json::object();
    for (const auto& [name, ids] : mesh.groups()) groups[name] = ids;
    return json{{"dim", dim},
                {"nodes", std::move(nodes)},
                {"elements", std::move(elements)},
                {"boundary", mesh.boundary_ids()},
                {"interior", mesh.interior_ids()},
                {"groups", std::move(groups)}};
}

Mesh mesh_from_json(const json& doc) {
    const int dim = as<int>(field(doc, "dim"), "dim");
    if (dim != 2 && dim != 3) fail(ErrorCode::Parse, "dim must be 2 or 3");
    const json& jn = field(doc, "nodes");
    if (!jn.is_array()) fail(ErrorCode::Parse, "nodes must be an array");
    std::vector<Point> nodes;
    nodes.reserve(jn.size());
    for (std::size_t i = 0; i < jn.size(); ++i)
        nodes.push_back(point_from_json(jn[i], dim, "nodes[" + std::to_string(i) + "]"));

    const json& je = field(doc, "elements");
    if (!je.is_array()) fail(ErrorCode::Parse, "elements must be an array");
    std::vector<NodeId> conn;
    conn.reserve(je.size() * (dim + 1));
    for (std::size_t e = 0; e < je.size(); ++e) {
        auto el = as<std::vector<NodeId>>(je[e], "elements[" + std::to_string(e) + "]");
        if (static_cast<int>(el.size()) != dim + 1)
            fail(ErrorCode::Parse, "elements[" + std::to_string(e) + "] must have " +
                                       std::to_string(dim + 1) + " nodes");
        conn.insert(conn.end(), el.begin(), el.end());
    }
    auto boundary = as<NodeIds>(field(doc, "boundary"), "boundary");
    Groups groups;
    if (doc.contains("groups")) {
        for (const auto& [name, ids] : doc.at("groups").items())
            groups[name] = as<NodeIds>(ids, "groups." + name);
    }
    Mesh mesh(dim, std::move(nodes), std::move(conn), std::move(boundary), std::move(groups));
    if (doc.contains("interior") && as<NodeIds>(doc.at("interior"), "interior") != mesh.interior_ids())
        fail(ErrorCode::Parse, "interior ids are not the complement of boundary ids");
    return mesh;
}

json field_to_json(const DisplacementField& d) {
    json vectors = json::array();
    for (const Point& v : d.vectors()) vectors.push_back({v.x(), v.y(), v.z()});
    return json{{"indices", d.indices()}, {"vectors", std::move(vectors)}};
}

DisplacementField field_from_json(const json& doc) {
    auto indices = as<NodeIds>(field(doc, "indices"), "indices");
    const json& jv = field(doc, "vectors");
    if (!jv.is_array()) fail(ErrorCode::Parse, "vectors must be an array");
    std::vector<Point> vectors;
    for (std::size_t i = 0; i < jv.size(); ++i) {
        const std::string where = "vectors[" + std::to_string(i) + "]";
        if (!jv[i].is_array() || jv[i].size() < 2 || jv[i].size() > 3)
            fail(ErrorCode::Parse, where + ": expected 2 or 3 components");
        vectors.push_back(point_from_json(jv[i], static_cast<int>(jv[i].size()), where));
    }
    return {std::move(indices), std::move(vectors)};
}

Mesh read_mesh(const std::filesystem::path& path, MeshFormat format) {
    if (format != MeshFormat::NativeJson)
        fail(ErrorCode::InvalidArgument, "only the native JSON format can be read");
    std::ifstream in(path);
    if (!in) fail(ErrorCode::Io, "cannot open " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        fail(ErrorCode::Parse, path.string() + " at byte " + std::to_string(e.byte) + ": " + e.what());
    }
    return mesh_from_json(doc);
}

void write_vtk(std::ostream& out, const Mesh& mesh, const DisplacementField* displacement) {
    out << "# vtk DataFile Version 3.0\n"
        << "morphkit mesh\n"
        << "ASCII\n"
        << "DATASET UNSTRUCTURED_GRID\n";
    out << std::setprecision(17);
    out << "POINTS " << mesh.node_count() << " double\n";
    for (const Point& p : mesh.nodes()) out << p.x() << ' ' << p.y() << ' ' << p.z() << '\n';

    const std::size_t npe = mesh.nodes_per_element();
    out << "CELLS " << mesh.element_count() << ' ' << mesh.element_count() * (npe + 1) << '\n';
    for (std::size_t e = 0; e < mesh.element_count(); ++e) {
        out << npe;
        for (NodeId v : mesh.element(e)) out << ' ' << v;
        out << '\n';
    }
    // 10 = VTK_TETRA, 5 = VTK_TRIANGLE
    const int cell_type = mesh.dim() == 3 ? 10 : 5;
    out << "CELL_TYPES " << mesh.element_count() << '\n';
    for (std::size_t e = 0; e < mesh.element_count(); ++e) out << cell_type << '\n';

    if (displacement) {
        std::vector<Point> d(mesh.node_count(), Point::Zero());
        for (std::size_t i = 0; i < displacement->size(); ++i)
            d.at(displacement->indices()[i]) = displacement->vectors()[i];
        out << "POINT_DATA " << mesh.node_count() << '\n' << "VECTORS displacement double\n";
        for (const Point& v : d) out << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
    }
}

void write_mesh(const Mesh& mesh, const std::filesystem::path& path, MeshFormat format) {
    std::ofstream out(path);
    if (!out) fail(ErrorCode::Io, "cannot write " + path.string());
    if (format == MeshFormat::NativeJson)
        out << mesh_to_json(mesh).dump();
    else
        write_vtk(out, mesh);
    if (!out) fail(ErrorCode::Io, "write failed for " + path.string());
}

} // namespace morphkit
