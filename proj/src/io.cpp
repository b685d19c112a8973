#include "cmae/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace cmae {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("io: cannot write '" + path.string() + "'");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("io: cannot read '" + path.string() + "'");
  return in;
}

std::vector<std::vector<double>> read_csv_rows(std::ifstream& in, const std::string& header,
                                               size_t cols, const std::string& what) {
  std::string line;
  if (!std::getline(in, line) || line != header)
    throw std::runtime_error("io: " + what + " has unexpected header");
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() != cols) throw std::runtime_error("io: " + what + " has a malformed row");
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

void write_history_csv(const std::filesystem::path& path,
                       const std::vector<IterationRecord>& history) {
  auto out = open_out(path);
  out << "k,R,lambda_est,sup_norm,norm_mu,m,residual,wall_time_s\n";
  for (const auto& r : history) {
    out << r.k << ',' << format_g17(r.R) << ',' << format_g17(r.lambda_est) << ','
        << format_g17(r.sup_norm) << ',' << format_g17(r.norm_mu) << ',' << format_g17(r.m)
        << ',' << format_g17(r.residual) << ',' << format_g17(r.wall_time_s) << '\n';
  }
}

void write_field_csv(const std::filesystem::path& path, const ScalarField2D& field) {
  auto out = open_out(path);
  out << "x,y,value\n";
  const GridDomain& g = *field.grid;
  for (int p = 0; p < g.num_interior(); ++p) {
    out << format_g17(g.x(g.nodes[p][0])) << ',' << format_g17(g.y(g.nodes[p][1])) << ','
        << format_g17(field.values[p]) << '\n';
  }
}

void write_field_csv(const std::filesystem::path& path, const RadialProfile& field) {
  auto out = open_out(path);
  out << "s,value\n";
  const RadialDomain& d = *field.dom;
  for (int i = 0; i < d.num_nodes(); ++i)
    out << format_g17(d.s[i]) << ',' << format_g17(field.values[i]) << '\n';
}

ScalarField2D read_field_csv(const std::filesystem::path& path,
                             std::shared_ptr<const GridDomain> grid) {
  auto in = open_in(path);
  auto rows = read_csv_rows(in, "x,y,value", 3, path.string());
  if (static_cast<int>(rows.size()) != grid->num_interior())
    throw std::runtime_error("io: field CSV row count does not match the domain");
  std::vector<double> vals(rows.size());
  for (size_t p = 0; p < rows.size(); ++p) {
    const double xx = grid->x(grid->nodes[p][0]), yy = grid->y(grid->nodes[p][1]);
    if (rows[p][0] != xx || rows[p][1] != yy)
      throw std::runtime_error("io: field CSV coordinates do not match the domain order");
    vals[p] = rows[p][2];
  }
  return make_field(std::move(grid), vals);
}

RadialProfile read_field_csv(const std::filesystem::path& path,
                             std::shared_ptr<const RadialDomain> dom) {
  auto in = open_in(path);
  auto rows = read_csv_rows(in, "s,value", 2, path.string());
  if (static_cast<int>(rows.size()) != dom->num_nodes())
    throw std::runtime_error("io: field CSV row count does not match the domain");
  std::vector<double> vals(rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i][0] != dom->s[i])
      throw std::runtime_error("io: field CSV s-grid does not match the domain");
    vals[i] = rows[i][1];
  }
  return make_profile(std::move(dom), vals);
}

void write_openq_csv(const std::filesystem::path& path, const OpenQuestionReport& report,
                     DomainMode mode) {
  auto out = open_out(path);
  const bool grid = mode == DomainMode::FullGrid;
  out << (grid ? "x,y,phi,w,diff\n" : "s,phi,w,diff\n");
  for (size_t i = 0; i < report.phi.size(); ++i) {
    if (grid)
      out << format_g17(report.coords[i][0]) << ',' << format_g17(report.coords[i][1]);
    else
      out << format_g17(report.coords[i][0]);
    out << ',' << format_g17(report.phi[i]) << ',' << format_g17(report.w[i]) << ','
        << format_g17(report.phi[i] - report.w[i]) << '\n';
  }
}

}  // namespace cmae
