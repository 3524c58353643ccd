#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "afem/error_norms.hpp"
#include "afem/experiments.hpp"

namespace afem {

/// Shortest round-trip scientific notation, padded to at least four
/// significant digits.
std::string format_number(double v);

/// CSV: step column, then a (value, rate) pair per field; the first row has
/// empty rate cells.
void write_error_table(const ErrorReport& report, Norm norm, const std::string& path);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::optional<double>>> rows;  // empty cells are nullopt
};
CsvTable read_csv_table(const std::string& path);

struct NamedField {
  std::string name;
  Field field;
};

/// Legacy-VTK ASCII unstructured grid; fields are sampled at mesh vertices.
/// Vector fields go out as VECTORS, scalar fields as SCALARS.
void write_vtk_fields(const TriMesh& mesh, const std::vector<NamedField>& fields, double time,
                      const std::string& path);

/// u, w, phi, p of a block vector.
void write_vtk_state(const Discretization& disc, const Eigen::VectorXd& x, double time, const std::string& path);

void write_json(const nlohmann::json& j, const std::string& path);

/// One row per step: index, time, k, theta, energies, rates, Newton
/// iterations and last residual, divergence residuals, stability margin.
void write_step_diagnostics(const std::vector<StepDiagnostics>& steps, const std::string& path);

void write_step_count_table(const std::vector<AdaptiveRun>& runs, const std::string& path);

}  // namespace afem
