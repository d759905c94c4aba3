#ifndef HODGECURL_MSHIO_HPP
#define HODGECURL_MSHIO_HPP

#include <fstream>
#include <sstream>

#include "hodgecurl/mesh.hpp"
#include "hodgecurl/meshgen.hpp"

namespace hodgecurl::mshio {

/// Gmsh MSH 2.2 ASCII subset: $Nodes and 4-node tetrahedra (type 4) from
/// $Elements; element tags are ignored, other element types are skipped.
inline meshgen::RawMesh read_msh(std::istream& in) {
  meshgen::RawMesh M;
  std::map<long long, int> node_id;
  std::string line;
  int lineno = 0;
  bool saw_format = false, saw_nodes = false, saw_elements = false;

  auto next_line = [&](const char* what) {
    if (!std::getline(in, line)) throw ParseError(std::string("unexpected end of file in ") + what,
                                                  lineno);
    ++lineno;
    return line;
  };

  while (std::getline(in, line)) {
    ++lineno;
    if (line.rfind("$MeshFormat", 0) == 0) {
      std::istringstream fs(next_line("$MeshFormat"));
      double version = 0;
      int filetype = 1, datasize = 0;
      if (!(fs >> version >> filetype >> datasize))
        throw ParseError("malformed $MeshFormat header", lineno);
      if (version < 2.0 || version >= 3.0 || filetype != 0)
        throw ParseError("unsupported mesh format (need MSH 2.x ASCII)", lineno);
      next_line("$MeshFormat");  // $EndMeshFormat
      saw_format = true;
    } else if (line.rfind("$Nodes", 0) == 0) {
      std::istringstream cs(next_line("$Nodes"));
      long long count = -1;
      if (!(cs >> count) || count < 0) throw ParseError("malformed node count", lineno);
      for (long long i = 0; i < count; ++i) {
        std::istringstream ns(next_line("$Nodes"));
        long long id;
        double x, y, z;
        if (!(ns >> id >> x >> y >> z)) throw ParseError("malformed node line", lineno);
        if (!node_id.emplace(id, static_cast<int>(M.vertices.size())).second)
          throw ParseError("duplicate node id " + std::to_string(id), lineno);
        M.vertices.emplace_back(x, y, z);
      }
      if (next_line("$Nodes").rfind("$EndNodes", 0) != 0)
        throw ParseError("expected $EndNodes", lineno);
      saw_nodes = true;
    } else if (line.rfind("$Elements", 0) == 0) {
      std::istringstream cs(next_line("$Elements"));
      long long count = -1;
      if (!(cs >> count) || count < 0) throw ParseError("malformed element count", lineno);
      for (long long i = 0; i < count; ++i) {
        std::istringstream es(next_line("$Elements"));
        long long id;
        int type, ntags;
        if (!(es >> id >> type >> ntags)) throw ParseError("malformed element line", lineno);
        long long tag;
        for (int t = 0; t < ntags; ++t)
          if (!(es >> tag)) throw ParseError("missing element tag", lineno);
        if (type == 4) {
          std::array<int, 4> tet;
          for (int v = 0; v < 4; ++v) {
            long long nid;
            if (!(es >> nid)) throw ParseError("tetrahedron with missing node", lineno);
            auto it = node_id.find(nid);
            if (it == node_id.end())
              throw ParseError("tetrahedron references unknown node " + std::to_string(nid),
                               lineno);
            tet[v] = it->second;
          }
          M.tets.push_back(tet);
        }  // other element types are ignored
      }
      if (next_line("$Elements").rfind("$EndElements", 0) != 0)
        throw ParseError("expected $EndElements", lineno);
      saw_elements = true;
    }
    // unknown sections are skipped line by line
  }
  if (!saw_format) throw ParseError("missing $MeshFormat section", lineno);
  if (!saw_nodes) throw ParseError("missing $Nodes section", lineno);
  if (!saw_elements || M.tets.empty())
    throw ParseError("no tetrahedra found in $Elements", lineno);
  return M;
}

inline meshgen::RawMesh read_msh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open mesh file " + path, 0);
  return read_msh(in);
}

inline void write_msh(std::ostream& out, const meshgen::RawMesh& M) {
  out << "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$Nodes\n" << M.vertices.size() << "\n";
  for (size_t i = 0; i < M.vertices.size(); ++i) {
    const Vec3& p = M.vertices[i];
    out << (i + 1) << " " << p.x() << " " << p.y() << " " << p.z() << "\n";
  }
  out << "$EndNodes\n$Elements\n" << M.tets.size() << "\n";
  for (size_t t = 0; t < M.tets.size(); ++t) {
    out << (t + 1) << " 4 2 0 1";
    for (int v : M.tets[t]) out << " " << (v + 1);
    out << "\n";
  }
  out << "$EndElements\n";
}

inline void write_msh_file(const std::string& path, const meshgen::RawMesh& M) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open output file " + path, 0);
  write_msh(out, M);
}

}  // namespace hodgecurl::mshio

#endif
