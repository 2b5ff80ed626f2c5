#pragma once

#include "morphkit/mesh.hpp"

#include <json.hpp>

#include <filesystem>
#include <string_view>

namespace morphkit {

enum class MeshFormat { NativeJson, VtkLegacy };

/// "json" / "native-json" or "vtk" / "vtk-legacy-ascii"; anything else is invalid-argument.
MeshFormat parse_mesh_format(std::string_view name);

nlohmann::json mesh_to_json(const Mesh& mesh);
Mesh mesh_from_json(const nlohmann::json& doc);

nlohmann::json field_to_json(const DisplacementField& d);
DisplacementField field_from_json(const nlohmann::json& doc);

/// Only the native format can be read back.
Mesh read_mesh(const std::filesystem::path& path, MeshFormat format = MeshFormat::NativeJson);
void write_mesh(const Mesh& mesh, const std::filesystem::path& path, MeshFormat format);

/// Legacy ASCII VTK unstructured grid. An optional per-node displacement is
/// written as POINT_DATA vectors.
void write_vtk(std::ostream& out, const Mesh& mesh, const DisplacementField* displacement = nullptr);

} // namespace morphkit
