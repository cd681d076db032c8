#include "nonhom/io.hpp"

#include <charconv>
#include <fstream>
#include <nlohmann/json.hpp>

namespace nonhom::io {

using nlohmann::ordered_json;

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

ordered_json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::InvalidInput, "cannot open " + path.string());
  ordered_json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    fail(ErrorCode::InvalidInput, "bad JSON in " + path.string() + ": " + e.what());
  }
  return j;
}

}  // namespace

MeasureFile load_measure(const std::filesystem::path& path) {
  ordered_json j = read_json_file(path);
  try {
    const int d = j.at("d").get<int>();
    const int n = j.at("n").get<int>();
    const double r_min = j.at("r_min").get<double>();
    const auto& jp = j.at("points");
    const auto& jm = j.at("masses");
    Eigen::MatrixXd pts(jp.size(), d);
    for (std::size_t i = 0; i < jp.size(); ++i) {
      if (jp[i].size() != static_cast<std::size_t>(d))
        fail(ErrorCode::InvalidInput, "point dimension mismatch");
      for (int t = 0; t < d; ++t) pts(i, t) = jp[i][t].get<double>();
    }
    Eigen::VectorXd masses(jm.size());
    for (std::size_t i = 0; i < jm.size(); ++i) masses[i] = jm[i].get<double>();
    if (n < 1 || n > d)
      fail(ErrorCode::InvalidInput, "growth degree must satisfy 1 <= n <= d");
    return MeasureFile{DiscreteMeasure(std::move(pts), std::move(masses), r_min), n};
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    fail(ErrorCode::InvalidInput, "bad measure file: " + std::string(e.what()));
  }
}

void save_measure(const DiscreteMeasure& mu, int n, const std::filesystem::path& path) {
  ordered_json j;
  j["d"] = mu.dimension();
  j["n"] = n;
  j["r_min"] = mu.r_min();
  ordered_json pts = ordered_json::array();
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    ordered_json row = ordered_json::array();
    for (int t = 0; t < mu.dimension(); ++t) row.push_back(mu.points()(i, t));
    pts.push_back(std::move(row));
  }
  j["points"] = std::move(pts);
  ordered_json ms = ordered_json::array();
  for (Eigen::Index i = 0; i < mu.size(); ++i) ms.push_back(mu.mass(i));
  j["masses"] = std::move(ms);
  write_json(path, j);
}

RealFunction load_real_function(const std::filesystem::path& path,
                                Eigen::Index expected_size) {
  ordered_json j = read_json_file(path);
  if (!j.contains("values"))
    fail(ErrorCode::InvalidInput, "function file must contain \"values\"");
  const auto& v = j["values"];
  if (static_cast<Eigen::Index>(v.size()) != expected_size)
    fail(ErrorCode::InvalidInput, "function length does not match the support");
  RealFunction f(expected_size);
  for (Eigen::Index i = 0; i < expected_size; ++i) f[i] = v[i].get<double>();
  return f;
}

ComplexFunction load_complex_function(const std::filesystem::path& path,
                                      Eigen::Index expected_size) {
  ordered_json j = read_json_file(path);
  if (j.contains("values")) {
    RealFunction f = load_real_function(path, expected_size);
    return f.cast<std::complex<double>>();
  }
  if (!j.contains("re") || !j.contains("im"))
    fail(ErrorCode::InvalidInput, "complex function file needs \"re\" and \"im\"");
  const auto& re = j["re"];
  const auto& im = j["im"];
  if (static_cast<Eigen::Index>(re.size()) != expected_size ||
      static_cast<Eigen::Index>(im.size()) != expected_size)
    fail(ErrorCode::InvalidInput, "function length does not match the support");
  ComplexFunction f(expected_size);
  for (Eigen::Index i = 0; i < expected_size; ++i)
    f[i] = std::complex<double>(re[i].get<double>(), im[i].get<double>());
  return f;
}

ordered_json cube_json(const Cube& q) {
  ordered_json j;
  ordered_json c = ordered_json::array();
  for (Eigen::Index t = 0; t < q.center.size(); ++t) c.push_back(q.center[t]);
  j["center"] = std::move(c);
  j["side"] = q.side;
  return j;
}

ordered_json norm_report_json(const NormReport& rep) {
  ordered_json j;
  j["value"] = rep.value;
  ordered_json c = ordered_json::array();
  for (Eigen::Index t = 0; t < rep.witness_inner.center.size(); ++t)
    c.push_back(rep.witness_inner.center[t]);
  j["witness_center"] = std::move(c);
  j["witness_side"] = rep.witness_inner.side;
  if (rep.witness_is_pair) j["witness_outer"] = cube_json(rep.witness_outer);
  j["osc_component"] = rep.osc_component;
  j["reg_component"] = rep.reg_component;
  j["family_size"] = rep.family_size;
  return j;
}

ordered_json cz_json(const CzDecomposition& dec) {
  ordered_json j;
  j["lambda"] = dec.lambda;
  j["p"] = dec.p;
  ordered_json cubes = ordered_json::array();
  for (const Cube& q : dec.stopping_cubes) cubes.push_back(cube_json(q));
  j["stopping_cubes"] = std::move(cubes);
  ordered_json comps = ordered_json::array();
  for (const Cube& q : dec.companions) comps.push_back(cube_json(q));
  j["companions"] = std::move(comps);
  auto fn_array = [](const RealFunction& f) {
    ordered_json a = ordered_json::array();
    for (Eigen::Index i = 0; i < f.size(); ++i) a.push_back(f[i]);
    return a;
  };
  ordered_json phis = ordered_json::array();
  for (const auto& phi : dec.phis) phis.push_back(fn_array(phi));
  j["phis"] = std::move(phis);
  ordered_json ws = ordered_json::array();
  for (const auto& w : dec.weights) ws.push_back(fn_array(w));
  j["weights"] = std::move(ws);
  j["good"] = fn_array(dec.good);
  j["certificates"] = {
      {"h1_upper", dec.h1_upper},
      {"b_used", dec.b_used},
      {"reconstruction_residual", dec.reconstruction_residual},
      {"cc4_residual", dec.cc4_residual},
      {"cc6_constant", dec.cc6_constant},
      {"cc7_ratio", dec.cc7_ratio},
      {"good_sup", dec.good_sup},
      {"max_overlap", dec.max_overlap},
      {"shrink_steps", dec.shrink_steps},
      {"blocks_valid", dec.blocks_valid},
      {"residual_eta_count", dec.residual_eta.size()},
  };
  return j;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::InvalidInput, "cannot write " + path.string());
  out << content;
}

void write_json(const std::filesystem::path& path, const ordered_json& j) {
  write_text(path, j.dump(2) + "\n");
}

void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    out += header[i];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_double(row[i]);
    }
    out += '\n';
  }
  write_text(path, out);
}

}  // namespace nonhom::io
