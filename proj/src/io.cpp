#include "afem/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace afem {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace

std::string format_number(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific);
  std::string s(buf, res.ptr);
  const auto e = s.find('e');
  std::string mant = s.substr(0, e);
  const std::string exp = s.substr(e);
  int digits = 0;
  for (char c : mant) digits += (c >= '0' && c <= '9');
  if (digits < 4) {
    if (mant.find('.') == std::string::npos) mant += '.';
    mant.append(static_cast<std::size_t>(4 - digits), '0');
  }
  return mant + exp;
}

void write_error_table(const ErrorReport& report, Norm norm, const std::string& path) {
  if (report.rows.empty()) throw std::invalid_argument("error table needs at least one row");
  std::ofstream out = open_out(path);
  const char* suffix = norm == Norm::l2 ? "_L2" : "_H1";
  out << report.step_label;
  for (const char* name : kComponentNames) out << ',' << name << suffix << ",rate";
  out << '\n';
  for (std::size_t r = 0; r < report.rows.size(); ++r) {
    out << format_number(1.0 / report.rows[r].step);
    for (int c = 0; c < 4; ++c) {
      const auto comp = static_cast<Component>(c);
      out << ',' << format_number(report.value(r, comp, norm)) << ',';
      if (r > 0) out << format_number(report.rate(r, comp, norm));
    }
    out << '\n';
  }
  finish(out, path);
}

CsvTable read_csv_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  CsvTable t;
  std::string line;
  auto split = [](const std::string& l) {
    std::vector<std::string> cells;
    std::stringstream ss(l);
    std::string c;
    while (std::getline(ss, c, ',')) cells.push_back(c);
    if (!l.empty() && l.back() == ',') cells.emplace_back();
    return cells;
  };
  if (!std::getline(in, line)) throw std::runtime_error("'" + path + "' is empty");
  t.header = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::optional<double>> row;
    for (const std::string& c : split(line)) {
      if (c.empty()) {
        row.emplace_back();
        continue;
      }
      double v = 0;
      const auto res = std::from_chars(c.data(), c.data() + c.size(), v);
      if (res.ec != std::errc() || res.ptr != c.data() + c.size()) {
        throw std::runtime_error("malformed number '" + c + "' in '" + path + "'");
      }
      row.emplace_back(v);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

void write_vtk_fields(const TriMesh& mesh, const std::vector<NamedField>& fields, double time,
                      const std::string& path) {
  const int nv = mesh.num_vertices();
  for (const NamedField& f : fields) {
    if (&f.field.space->mesh() != &mesh) throw std::invalid_argument("field '" + f.name + "' is on another mesh");
  }
  std::ofstream out = open_out(path);
  out.precision(17);
  out << "# vtk DataFile Version 3.0\n"
      << "afem fields t=" << format_number(time) << "\n"
      << "ASCII\nDATASET UNSTRUCTURED_GRID\n"
      << "FIELD FieldData 1\nTIME 1 1 double\n" << format_number(time) << "\n"
      << "POINTS " << nv << " double\n";
  for (int v = 0; v < nv; ++v) {
    const Point2& x = mesh.vertices()[v];
    out << x.x() << ' ' << x.y() << " 0\n";
  }
  const int nt = mesh.num_triangles();
  out << "CELLS " << nt << ' ' << 4 * nt << '\n';
  for (int e = 0; e < nt; ++e) {
    const auto& tri = mesh.triangles()[e];
    out << "3 " << tri[0] << ' ' << tri[1] << ' ' << tri[2] << '\n';
  }
  out << "CELL_TYPES " << nt << '\n';
  for (int e = 0; e < nt; ++e) out << "5\n";
  out << "POINT_DATA " << nv << '\n';
  // Vertex v carries scalar DoF v in both P1 and P2 numbering.
  for (const NamedField& f : fields) {
    const Field& fld = f.field;
    const int ns = fld.space->scalar_dof_count();
    if (fld.space->components() == 2) {
      out << "VECTORS " << f.name << " double\n";
      for (int v = 0; v < nv; ++v) out << fld.coeffs[v] << ' ' << fld.coeffs[ns + v] << " 0\n";
    } else {
      out << "SCALARS " << f.name << " double 1\nLOOKUP_TABLE default\n";
      for (int v = 0; v < nv; ++v) out << fld.coeffs[v] << '\n';
    }
  }
  finish(out, path);
}

void write_vtk_state(const Discretization& disc, const Eigen::VectorXd& x, double time, const std::string& path) {
  write_vtk_fields(disc.mesh(), {{"u", disc.u(x)}, {"w", disc.w(x)}, {"phi", disc.phi(x)}, {"p", disc.p(x)}},
                   time, path);
}

void write_json(const nlohmann::json& j, const std::string& path) {
  std::ofstream out = open_out(path);
  out << j.dump(2) << '\n';
  finish(out, path);
}

void write_step_diagnostics(const std::vector<StepDiagnostics>& steps, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "step,time,k,theta,g_energy,kinetic,nd_u,nd_w,vd_u,sd_w,chi_u,chi_w,newton_iterations,"
         "final_residual,div_u,div_w,stability_margin\n";
  for (const StepDiagnostics& d : steps) {
    const double last = d.residual_norms.empty() ? 0.0 : d.residual_norms.back();
    out << d.step << ',' << format_number(d.time) << ',' << format_number(d.k) << ',' << format_number(d.theta)
        << ',' << format_number(d.g_energy) << ',' << format_number(d.kinetic) << ','
        << format_number(d.rates.numerical_u) << ',' << format_number(d.rates.numerical_w) << ','
        << format_number(d.rates.viscous_u) << ',' << format_number(d.rates.stability_w) << ','
        << format_number(d.rates.chi_u()) << ',' << format_number(d.rates.chi_w()) << ','
        << d.newton_iterations << ',' << format_number(last) << ',' << format_number(d.divergence.u) << ','
        << format_number(d.divergence.w) << ',' << format_number(d.stability.margin) << '\n';
  }
  finish(out, path);
}

void write_step_count_table(const std::vector<AdaptiveRun>& runs, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "Re,adaptive_steps,constant_steps\n";
  for (const AdaptiveRun& r : runs) {
    out << format_number(r.re) << ',' << r.adaptive_steps << ',' << r.constant_steps << '\n';
  }
  finish(out, path);
}

}  // namespace afem
