#include "germforge/mesh.hpp"

#include "germforge/scalar.hpp"

#include <cmath>

namespace germforge {

bool Mesh::valid() const {
    for (const Vec3& p : vertices)
        for (double c : p)
            if (!std::isfinite(c)) return false;
    for (const auto& f : faces)
        for (std::size_t idx : f)
            if (idx >= vertices.size()) return false;
    return true;
}

MeshFormat mesh_format_from_string(const std::string& text) {
    if (text == "obj") return MeshFormat::Obj;
    if (text == "csv") return MeshFormat::Csv;
    throw UsageError("unknown mesh format '" + text + "' (expected obj|csv)");
}

}  // namespace germforge
