#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

namespace germforge {

using Vec3 = std::array<double, 3>;

/// Triangulated surface. Faces index into `vertices` and are oriented counterclockwise
/// in parameter space.
struct Mesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<std::size_t, 3>> faces;
    std::map<std::string, std::string> metadata;
    /// Chart coordinates each vertex was sampled at.
    std::vector<std::array<double, 2>> parameters;
    /// Grid cells dropped because a vertex could not be evaluated.
    std::size_t skipped_cells = 0;

    bool valid() const;
};

enum class MeshFormat { Obj, Csv };

MeshFormat mesh_format_from_string(const std::string& text);

}  // namespace germforge
