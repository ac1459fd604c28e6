// Sparse linear-program container and the solver-facing contract. Models are
// assembled in named variable blocks so that solutions can be read back by
// role, and can be serialized to a plain text layout for external debugging.

#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace owa::lp {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Relation { LessEqual, Equal, GreaterEqual };
enum class Sense { Minimize, Maximize };

struct Constraint {
  std::vector<std::pair<int, double>> terms;  // (column, coefficient)
  Relation relation = Relation::LessEqual;
  double rhs = 0.0;
};

/// Contiguous run of columns sharing a role. A block with `dim2 > 0` is a
/// matrix laid out row-major; its columns print as name[i,j].
struct VariableBlock {
  std::string name;
  int start = 0;
  int count = 0;
  int dim2 = 0;
};

class LinearProgram {
 public:
  Sense sense = Sense::Minimize;
  double objective_constant = 0.0;

  int num_cols() const { return static_cast<int>(objective_.size()); }
  int num_rows() const { return static_cast<int>(constraints_.size()); }

  /// Appends `count` columns with shared bounds; returns the first index.
  int add_block(const std::string& name, int count, double lower, double upper,
                int dim2 = 0);
  int add_column(const std::string& block_name, double lower, double upper);

  void set_objective(int col, double coef) { objective_[col] = coef; }
  double objective(int col) const { return objective_[col]; }
  const std::vector<double>& objective() const { return objective_; }

  void set_bounds(int col, double lower, double upper);
  double lower(int col) const { return lower_[col]; }
  double upper(int col) const { return upper_[col]; }

  int add_constraint(Constraint c);
  int add_constraint(std::vector<std::pair<int, double>> terms, Relation rel,
                     double rhs);
  const Constraint& constraint(int row) const { return constraints_[row]; }
  const std::vector<Constraint>& constraints() const { return constraints_; }

  const std::vector<VariableBlock>& blocks() const { return blocks_; }
  const VariableBlock* find_block(const std::string& name) const;
  std::string column_name(int col) const;

 private:
  std::vector<double> objective_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<Constraint> constraints_;
  std::vector<VariableBlock> blocks_;
};

enum class SolveStatus { Optimal, Infeasible, Unbounded, IterationLimit, Numerical };

std::string to_string(SolveStatus status);

struct SolverOptions {
  double tolerance = 1e-9;       // relative feasibility/gap target
  int max_iterations = 200;
  // Presolve: rows sharing a proportional dense segment (aligned to fixed
  // column windows) get the segment replaced by one auxiliary variable.
  bool extract_shared_segments = true;
  int segment_window = 64;
  int segment_min_entries = 16;
};

struct LpSolution {
  SolveStatus status = SolveStatus::Numerical;
  double objective = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> primal;     // per original column
  std::vector<double> row_duals;  // per original row
  int iterations = 0;
  double solve_seconds = 0.0;
};

/// Solves with the built-in sparse homogeneous self-dual interior-point
/// method. Deterministic for fixed options; concurrent calls on distinct
/// instances are safe.
LpSolution solve_lp(const LinearProgram& lp, const SolverOptions& options = {});

/// Plain text layout: objective first, one line per constraint
/// ("r<i>: coef*var ... <op> rhs"), bounds last.
void write_lp_text(const LinearProgram& lp, std::ostream& os);

}  // namespace owa::lp
