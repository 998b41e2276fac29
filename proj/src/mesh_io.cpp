#include "vemspectra/mesh_io.hpp"

#include <json.hpp>

#include <fstream>
#include <map>

namespace vems {

using nlohmann::json;

std::string mesh_to_json(const PolyMesh& mesh) {
  json doc;
  auto& verts = doc["vertices"] = json::array();
  for (const Vec2& p : mesh.vertices) verts.push_back({p.x(), p.y()});
  auto& elems = doc["elements"] = json::array();
  for (const auto& cyc : mesh.elements) elems.push_back(cyc);
  auto& edges = doc["edges"] = json::array();
  for (const Edge& ed : mesh.edges)
    edges.push_back({ed.v0, ed.v1, edge_tag_name(ed.tag)});
  return doc.dump(2);
}

PolyMesh mesh_from_json(const std::string& text) {
  const json doc = json::parse(text);
  PolyMesh mesh;
  for (const auto& v : doc.at("vertices"))
    mesh.vertices.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
  for (const auto& cyc : doc.at("elements"))
    mesh.elements.push_back(cyc.get<std::vector<int>>());

  std::map<std::pair<int, int>, EdgeTag> tags;
  for (const auto& ed : doc.at("edges")) {
    const int a = ed.at(0).get<int>();
    const int b = ed.at(1).get<int>();
    tags[std::minmax(a, b)] = edge_tag_from_name(ed.at(2).get<std::string>());
  }
  mesh.finalize([&tags](int a, int b) -> std::optional<EdgeTag> {
    auto it = tags.find(std::minmax(a, b));
    if (it == tags.end()) return std::nullopt;
    return it->second;
  });
  return mesh;
}

void save_mesh(const PolyMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw MeshError("cannot open " + path + " for writing");
  out << mesh_to_json(mesh) << '\n';
}

PolyMesh load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return mesh_from_json(text);
}

}  // namespace vems
