#pragma once

#include <string>

#include "geometry.hpp"

namespace pcs {

// CSV: one point per line, d comma-separated decimals, optional header.
// ASCII PLY with vertex elements is accepted on input as well.
PointCloud load_cloud(const std::string& path);
PointCloud parse_csv(const std::string& text);
PointCloud parse_ply(const std::string& text);

void save_csv(const PointCloud& cloud, const std::string& path);
std::string to_csv(const PointCloud& cloud);

}  // namespace pcs
