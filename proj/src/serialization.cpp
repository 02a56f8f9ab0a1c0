#include "gci/serialization.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <variant>

#include <json.hpp>

namespace gci {

namespace {

using json = nlohmann::ordered_json;

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

Matrix matrix_from_json(const json& rows) {
  if (!rows.is_array() || rows.empty()) throw std::invalid_argument("matrix field must be a nonempty array");
  const Eigen::Index r = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index c = static_cast<Eigen::Index>(rows.at(0).size());
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    const json& row = rows.at(static_cast<std::size_t>(i));
    if (static_cast<Eigen::Index>(row.size()) != c)
      throw std::invalid_argument("matrix rows have inconsistent lengths");
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = row.at(static_cast<std::size_t>(j)).get<double>();
  }
  return m;
}

json vector_to_json(const Vector& v) {
  json values = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) values.push_back(v(i));
  return values;
}

Vector vector_from_json(const json& values) {
  if (!values.is_array()) throw std::invalid_argument("vector field must be an array");
  Vector v(static_cast<Eigen::Index>(values.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = values.at(static_cast<std::size_t>(i)).get<double>();
  return v;
}

json body_to_json(const SymmetricConvexBody& body) {
  json node;
  node["dimension"] = body.dimension();
  struct Visitor {
    json& node;
    void operator()(const Ball& b) const {
      node["shape"] = "ball";
      node["radius"] = b.radius;
    }
    void operator()(const Box& b) const {
      node["shape"] = "box";
      node["halfwidths"] = vector_to_json(b.halfwidths);
    }
    void operator()(const Ellipsoid& e) const {
      node["shape"] = "ellipsoid";
      node["q_matrix"] = matrix_to_json(e.q());
    }
    void operator()(const Polytope& p) const {
      node["shape"] = "polytope";
      json halfspaces = json::array();
      for (const Halfspace& h : p.representatives()) {
        json entry;
        entry["normal"] = vector_to_json(h.normal);
        entry["offset"] = h.offset;
        halfspaces.push_back(entry);
      }
      node["halfspaces"] = halfspaces;
    }
    void operator()(const LinearImage& li) const {
      node["shape"] = "linear_image";
      node["transform"] = matrix_to_json(li.transform);
      node["base"] = body_to_json(*li.base);
    }
    void operator()(const Intersection& is) const {
      node["shape"] = "intersection";
      node["left"] = body_to_json(*is.left);
      node["right"] = body_to_json(*is.right);
    }
  };
  std::visit(Visitor{node}, body.shape());
  return node;
}

SymmetricConvexBody body_from_json(const json& node) {
  const int dimension = node.at("dimension").get<int>();
  const std::string shape = node.at("shape").get<std::string>();
  if (shape == "ball") return make_ball(dimension, node.at("radius").get<double>());
  if (shape == "box") return make_box(vector_from_json(node.at("halfwidths")));
  if (shape == "ellipsoid") return make_ellipsoid(matrix_from_json(node.at("q_matrix")));
  if (shape == "polytope") {
    std::vector<Halfspace> representatives;
    for (const json& entry : node.at("halfspaces")) {
      representatives.push_back(
          Halfspace{vector_from_json(entry.at("normal")), entry.at("offset").get<double>()});
    }
    return make_polytope(dimension, std::move(representatives));
  }
  if (shape == "linear_image")
    return linear_image(matrix_from_json(node.at("transform")), body_from_json(node.at("base")));
  if (shape == "intersection")
    return intersect(body_from_json(node.at("left")), body_from_json(node.at("right")));
  throw std::invalid_argument("unknown shape tag: " + shape);
}

json parse_text(const std::string& text) {
  json node = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (node.is_discarded()) throw std::invalid_argument("malformed structured text");
  return node;
}

// Missing keys and type mismatches surface as library exceptions; fold them
// into the invalid_argument contract shared by every decoder.
template <typename Decode>
auto decoded(const char* label, Decode&& decode) {
  try {
    return decode();
  } catch (const json::exception& error) {
    throw std::invalid_argument(std::string(label) + ": " + error.what());
  }
}

}  // namespace

std::string format_double(double x) {
  std::array<char, 40> buffer{};
  const auto result = std::to_chars(buffer.data(), buffer.data() + buffer.size(), x);
  if (result.ec != std::errc{}) throw std::runtime_error("double formatting failed");
  return std::string(buffer.data(), result.ptr);
}

std::string to_text(const SymmetricConvexBody& body) { return body_to_json(body).dump(); }

SymmetricConvexBody body_from_text(const std::string& text) {
  return decoded("malformed body text", [&] { return body_from_json(parse_text(text)); });
}

std::string to_text(const matrix_lab::MatrixQuintuple& q) {
  json node;
  node["n"] = q.n;
  node["m"] = matrix_to_json(q.m);
  node["p"] = matrix_to_json(q.p);
  node["r"] = matrix_to_json(q.r);
  node["s"] = matrix_to_json(q.s);
  node["t"] = matrix_to_json(q.t);
  return node.dump();
}

matrix_lab::MatrixQuintuple quintuple_from_text(const std::string& text) {
  return decoded("malformed quintuple text", [&] {
    const json node = parse_text(text);
    matrix_lab::MatrixQuintuple q;
    q.n = node.at("n").get<int>();
    q.m = matrix_from_json(node.at("m"));
    q.p = matrix_from_json(node.at("p"));
    q.r = matrix_from_json(node.at("r"));
    q.s = matrix_from_json(node.at("s"));
    q.t = matrix_from_json(node.at("t"));
    return q;
  });
}

std::string to_text(const matrix_lab::AnglePair& angles) {
  json node;
  node["n"] = angles.n;
  node["alpha"] = matrix_to_json(angles.alpha);
  node["beta"] = matrix_to_json(angles.beta);
  node["shared_eigenbasis"] = matrix_to_json(angles.shared_eigenbasis);
  return node.dump();
}

matrix_lab::AnglePair angle_pair_from_text(const std::string& text) {
  return decoded("malformed angle-pair text", [&] {
    const json node = parse_text(text);
    matrix_lab::AnglePair angles;
    angles.n = node.at("n").get<int>();
    angles.alpha = matrix_from_json(node.at("alpha"));
    angles.beta = matrix_from_json(node.at("beta"));
    angles.shared_eigenbasis = matrix_from_json(node.at("shared_eigenbasis"));
    return angles;
  });
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file for reading: " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace gci
