#ifndef GCI_SERIALIZATION_HPP
#define GCI_SERIALIZATION_HPP

#include <string>

#include "gci/convex_sets.hpp"
#include "gci/matrix_lab.hpp"

namespace gci {

/// Shortest decimal form that parses back to the same double.
std::string format_double(double x);

/// Bodies, quintuples and angle pairs serialize to structured text (JSON):
/// nested shape records with fields
///   dimension, shape, radius, halfwidths, q_matrix (row-major),
///   halfspaces (normal..., offset; one entry per mirror pair),
///   transform (row-major), base, left, right
/// and row-major matrix fields m, p, r, s, t / alpha, beta,
/// shared_eigenbasis. Round-trips are value-exact.
std::string to_text(const SymmetricConvexBody& body);
SymmetricConvexBody body_from_text(const std::string& text);

std::string to_text(const matrix_lab::MatrixQuintuple& q);
matrix_lab::MatrixQuintuple quintuple_from_text(const std::string& text);

std::string to_text(const matrix_lab::AnglePair& angles);
matrix_lab::AnglePair angle_pair_from_text(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace gci

#endif  // GCI_SERIALIZATION_HPP
