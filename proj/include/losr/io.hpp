#pragma once

// JSON serialization of resources and monotone certificates.
//
// Resource files:
//   { "spec": { "A": {"dim": n, "kind": "trivial|classical|quantum"}, "B":
//   ..., "X": ..., "Y": ... }, "choi": { "re": [[...]], "im": [[...]] } }
// row-major, A(x)B(x)X(x)Y ordering. Boxes may instead carry
//   { "box": { "P": [[[[...]]]] } } indexed [a][b][x][y].

#include "losr/monotones.hpp"
#include "losr/resource.hpp"

#include <json.hpp>

#include <fstream>

namespace losr {

using json = nlohmann::json;

inline json system_to_json(const SystemSpec& s) {
  std::string kind = s.kind == SystemKind::Trivial ? "trivial"
                     : s.kind == SystemKind::Classical ? "classical"
                                                       : "quantum";
  return json{{"dim", s.dim}, {"kind", kind}};
}

inline SystemSpec system_from_json(const json& j) {
  std::string kind = j.at("kind").get<std::string>();
  int dim = j.at("dim").get<int>();
  if (kind == "trivial") return SystemSpec::make(dim, SystemKind::Trivial);
  if (kind == "classical") return SystemSpec::make(dim, SystemKind::Classical);
  if (kind == "quantum") return SystemSpec::make(dim, SystemKind::Quantum);
  throw std::invalid_argument("unknown system kind: " + kind);
}

inline json matrix_to_json(const CMat& m) {
  json re = json::array(), im = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json rre = json::array(), rim = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      rre.push_back(m(r, c).real());
      rim.push_back(m(r, c).imag());
    }
    re.push_back(rre);
    im.push_back(rim);
  }
  return json{{"re", re}, {"im", im}};
}

inline CMat matrix_from_json(const json& j) {
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  const int rows = static_cast<int>(re.size());
  if (rows == 0) throw std::invalid_argument("matrix json: empty");
  const int cols = static_cast<int>(re[0].size());
  CMat m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      m(r, c) = cplx(re.at(r).at(c).get<double>(), im.at(r).at(c).get<double>());
  return m;
}

inline json resource_to_json(const ChoiResource& r) {
  return json{{"spec",
               {{"A", system_to_json(r.spec.a)},
                {"B", system_to_json(r.spec.b)},
                {"X", system_to_json(r.spec.x)},
                {"Y", system_to_json(r.spec.y)}}},
              {"choi", matrix_to_json(r.choi)}};
}

inline ChoiResource resource_from_json(const json& j) {
  if (j.contains("box")) {
    const auto& p = j.at("box").at("P");
    int da = static_cast<int>(p.size());
    int db = static_cast<int>(p.at(0).size());
    int dx = static_cast<int>(p.at(0).at(0).size());
    int dy = static_cast<int>(p.at(0).at(0).at(0).size());
    BoxTable box(da, db, dx, dy);
    for (int a = 0; a < da; ++a)
      for (int b = 0; b < db; ++b)
        for (int x = 0; x < dx; ++x)
          for (int y = 0; y < dy; ++y) box.at(a, b, x, y) = p.at(a).at(b).at(x).at(y).get<double>();
    ChoiResource r = make_box(box);
    if (j.contains("spec")) {
      ResourceSpec s{system_from_json(j.at("spec").at("A")), system_from_json(j.at("spec").at("B")),
                     system_from_json(j.at("spec").at("X")), system_from_json(j.at("spec").at("Y"))};
      if (!(s == r.spec)) throw std::invalid_argument("box spec does not match the P array shape");
    }
    return r;
  }
  ResourceSpec s{system_from_json(j.at("spec").at("A")), system_from_json(j.at("spec").at("B")),
                 system_from_json(j.at("spec").at("X")), system_from_json(j.at("spec").at("Y"))};
  CMat m = matrix_from_json(j.at("choi"));
  if (m.rows() != s.choi_dim())
    throw std::invalid_argument("choi matrix dimension does not match spec");
  return ChoiResource(s, m, 1e-9);
}

inline ChoiResource load_resource(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  return resource_from_json(j);
}

inline void save_resource(const ChoiResource& r, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << resource_to_json(r).dump(1) << "\n";
}

inline json certificate_to_json(const MonotoneResult& res) {
  return json{{"monotone", monotone_name(res.name)},
              {"value", res.value},
              {"exactness", res.exactness()},
              {"noise_choi", matrix_to_json(res.noise_choi)},
              {"scale", res.scale}};
}

inline void save_certificate(const MonotoneResult& res, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << certificate_to_json(res).dump(1) << "\n";
}

}  // namespace losr
