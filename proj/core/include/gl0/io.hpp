#pragma once

#include <Eigen/Dense>
#include <string>

namespace gl0::io {

/// Row-major comma-separated matrix; a first row that fails numeric
/// parsing is treated as an optional header.
Eigen::MatrixXd read_csv(const std::string& path);

/// Write with 17 significant digits so values round-trip bit-faithfully.
void write_csv(const std::string& path, const Eigen::MatrixXd& mat);

std::string format_double(double x);

}  // namespace gl0::io
