#include "cloud_io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace pcs {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, sep)) out.push_back(field);
  return out;
}

bool parse_double(const std::string& s, double& out) {
  try {
    std::size_t pos = 0;
    out = std::stod(s, &pos);
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
      ++pos;
    return pos == s.size();
  } catch (...) {
    return false;
  }
}

void check_point(const Point& p) {
  for (int i = 0; i < p.dim; ++i)
    if (!std::isfinite(p.v[i]))
      throw std::runtime_error("point cloud: non-finite coordinate");
}

}  // namespace

PointCloud parse_csv(const std::string& text) {
  PointCloud cloud;
  cloud.dim = 0;
  std::stringstream ss(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto fields = split(line, ',');
    std::vector<double> vals;
    bool numeric = true;
    for (const auto& f : fields) {
      double v;
      if (!parse_double(f, v)) {
        numeric = false;
        break;
      }
      vals.push_back(v);
    }
    if (!numeric) {
      if (cloud.pts.empty() && lineno == 1) continue;  // header row
      throw std::runtime_error("csv: non-numeric field at line " +
                               std::to_string(lineno));
    }
    if (vals.size() != 2 && vals.size() != 3)
      throw std::runtime_error("csv: expected 2 or 3 fields at line " +
                               std::to_string(lineno));
    Point p;
    p.dim = static_cast<int>(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i) p.v[i] = vals[i];
    check_point(p);
    if (cloud.dim == 0) cloud.dim = p.dim;
    if (p.dim != cloud.dim)
      throw std::runtime_error("csv: mixed dimensions at line " +
                               std::to_string(lineno));
    cloud.pts.push_back(p);
  }
  if (cloud.pts.empty()) throw std::runtime_error("csv: no points");
  return cloud;
}

PointCloud parse_ply(const std::string& text) {
  std::stringstream ss(text);
  std::string line;
  std::getline(ss, line);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "ply") throw std::runtime_error("ply: missing magic");
  std::size_t n_vertices = 0;
  int coord_props = 0;
  bool in_vertex = false, ascii = false;
  while (std::getline(ss, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::stringstream ls(line);
    std::string tok;
    ls >> tok;
    if (tok == "format") {
      std::string fmt;
      ls >> fmt;
      ascii = fmt == "ascii";
    } else if (tok == "element") {
      std::string name;
      ls >> name >> n_vertices;
      in_vertex = name == "vertex";
      if (!in_vertex && n_vertices > 0 && coord_props == 0)
        throw std::runtime_error("ply: vertex element not first");
    } else if (tok == "property" && in_vertex) {
      std::string type, name;
      ls >> type >> name;
      if (name == "x" || name == "y" || name == "z") ++coord_props;
    } else if (tok == "end_header") {
      break;
    }
  }
  if (!ascii) throw std::runtime_error("ply: only ascii format supported");
  if (n_vertices == 0 || (coord_props != 2 && coord_props != 3))
    throw std::runtime_error("ply: missing vertex coordinates");
  PointCloud cloud;
  cloud.dim = coord_props;
  for (std::size_t i = 0; i < n_vertices; ++i) {
    if (!std::getline(ss, line)) throw std::runtime_error("ply: truncated");
    std::stringstream ls(line);
    Point p;
    p.dim = coord_props;
    for (int d = 0; d < coord_props; ++d)
      if (!(ls >> p.v[d])) throw std::runtime_error("ply: bad vertex line");
    check_point(p);
    cloud.pts.push_back(p);
  }
  return cloud;
}

PointCloud load_cloud(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  if (text.rfind("ply", 0) == 0) return parse_ply(text);
  return parse_csv(text);
}

std::string to_csv(const PointCloud& cloud) {
  std::string out;
  char buf[64];
  for (const Point& p : cloud.pts) {
    for (int i = 0; i < cloud.dim; ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", p.v[i]);
      out += buf;
      out += (i + 1 < cloud.dim) ? ',' : '\n';
    }
  }
  return out;
}

void save_csv(const PointCloud& cloud, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << to_csv(cloud);
}

}  // namespace pcs
