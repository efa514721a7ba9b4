#include "bltk/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace bltk {

namespace {

std::string dir_of(const std::string& path) {
  auto pos = path.find_last_of('/');
  return pos == std::string::npos ? std::string(".") : path.substr(0, pos);
}

std::string stem_of(const std::string& path) {
  auto pos = path.find_last_of('/');
  std::string base = pos == std::string::npos ? path : path.substr(pos + 1);
  auto dot = base.find_last_of('.');
  return dot == std::string::npos ? base : base.substr(0, dot);
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void save_fixed_point(const FixedPointResult& fp, const std::string& json_path) {
  const RayGrid2D& w = fp.solution;
  std::string csv_name = stem_of(json_path) + ".csv";

  std::ostringstream csv;
  csv << "i,j,r,m,re,im\n";
  for (std::size_t i = 0; i < w.r_grid.size(); ++i)
    for (int j = 0; j < w.n_m; ++j)
      csv << i << "," << j << "," << fmt17(w.r_grid[i]) << ","
          << fmt17(w.m_at(j)) << "," << fmt17(w.values[i][j].real()) << ","
          << fmt17(w.values[i][j].imag()) << "\n";

  nlohmann::json h;
  h["eps"] = {fp.eps.real(), fp.eps.imag()};
  h["direction"] = w.direction;
  h["m_max"] = w.m_max;
  h["n_m"] = w.n_m;
  h["n_r"] = w.r_grid.size();
  h["iterations"] = fp.iterations;
  h["residual_norm"] = fp.residual_norm;
  h["contraction_ratios"] = fp.contraction_ratios;
  h["values_csv"] = csv_name;

  std::ofstream jf(json_path, std::ios::binary | std::ios::trunc);
  if (!jf) throw std::runtime_error("save_fixed_point: cannot write " + json_path);
  jf << h.dump(2) << "\n";
  std::ofstream cf(dir_of(json_path) + "/" + csv_name,
                   std::ios::binary | std::ios::trunc);
  if (!cf) throw std::runtime_error("save_fixed_point: cannot write " + csv_name);
  cf << csv.str();
}

FixedPointResult load_fixed_point(const std::string& json_path) {
  std::ifstream jf(json_path, std::ios::binary);
  if (!jf) throw std::runtime_error("load_fixed_point: cannot read " + json_path);
  nlohmann::json h = nlohmann::json::parse(jf);

  FixedPointResult fp;
  fp.eps = cplx(h.at("eps")[0].get<double>(), h.at("eps")[1].get<double>());
  fp.iterations = h.at("iterations").get<int>();
  fp.residual_norm = h.at("residual_norm").get<double>();
  fp.contraction_ratios = h.at("contraction_ratios").get<std::vector<double>>();

  RayGrid2D& w = fp.solution;
  w.direction = h.at("direction").get<double>();
  w.m_max = h.at("m_max").get<double>();
  w.n_m = h.at("n_m").get<int>();
  std::size_t n_r = h.at("n_r").get<std::size_t>();
  w.r_grid.assign(n_r, 0.0);
  w.values.assign(n_r, std::vector<cplx>(w.n_m, cplx(0.0)));

  std::string csv_path =
      dir_of(json_path) + "/" + h.at("values_csv").get<std::string>();
  std::ifstream cf(csv_path, std::ios::binary);
  if (!cf) throw std::runtime_error("load_fixed_point: cannot read " + csv_path);
  std::string line;
  std::getline(cf, line);  // header row
  std::size_t rows = 0;
  while (std::getline(cf, line)) {
    if (line.empty()) continue;
    std::size_t i;
    int j;
    double r, m, re, im;
    if (std::sscanf(line.c_str(), "%zu,%d,%lf,%lf,%lf,%lf", &i, &j, &r, &m,
                    &re, &im) != 6)
      throw std::runtime_error("load_fixed_point: malformed row: " + line);
    if (i >= n_r || j < 0 || j >= w.n_m)
      throw std::runtime_error("load_fixed_point: index out of range: " + line);
    w.r_grid[i] = r;
    w.values[i][j] = cplx(re, im);
    ++rows;
  }
  if (rows != n_r * static_cast<std::size_t>(w.n_m))
    throw std::runtime_error("load_fixed_point: row count mismatch in " +
                             csv_path);
  return fp;
}

}  // namespace bltk
