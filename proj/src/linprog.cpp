#include "owa/linprog.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace owa::lp {

int LinearProgram::add_block(const std::string& name, int count, double lower,
                             double upper, int dim2) {
  if (count <= 0) throw std::invalid_argument("variable block must be non-empty");
  const int start = num_cols();
  objective_.insert(objective_.end(), count, 0.0);
  lower_.insert(lower_.end(), count, lower);
  upper_.insert(upper_.end(), count, upper);
  blocks_.push_back(VariableBlock{name, start, count, dim2});
  return start;
}

int LinearProgram::add_column(const std::string& block_name, double lower,
                              double upper) {
  return add_block(block_name, 1, lower, upper);
}

void LinearProgram::set_bounds(int col, double lower, double upper) {
  lower_[col] = lower;
  upper_[col] = upper;
}

int LinearProgram::add_constraint(Constraint c) {
  for (const auto& [col, coef] : c.terms) {
    if (col < 0 || col >= num_cols())
      throw std::out_of_range("constraint references unknown column");
    (void)coef;
  }
  constraints_.push_back(std::move(c));
  return num_rows() - 1;
}

int LinearProgram::add_constraint(std::vector<std::pair<int, double>> terms,
                                  Relation rel, double rhs) {
  Constraint c;
  c.terms = std::move(terms);
  c.relation = rel;
  c.rhs = rhs;
  return add_constraint(std::move(c));
}

const VariableBlock* LinearProgram::find_block(const std::string& name) const {
  for (const auto& b : blocks_)
    if (b.name == name) return &b;
  return nullptr;
}

std::string LinearProgram::column_name(int col) const {
  for (const auto& b : blocks_) {
    if (col >= b.start && col < b.start + b.count) {
      const int offset = col - b.start;
      char buf[96];
      if (b.dim2 > 0)
        std::snprintf(buf, sizeof(buf), "%s[%d,%d]", b.name.c_str(),
                      offset / b.dim2 + 1, offset % b.dim2 + 1);
      else
        std::snprintf(buf, sizeof(buf), "%s[%d]", b.name.c_str(), offset + 1);
      return buf;
    }
  }
  return "c" + std::to_string(col);
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "OPTIMAL";
    case SolveStatus::Infeasible: return "INFEASIBLE";
    case SolveStatus::Unbounded: return "UNBOUNDED";
    case SolveStatus::IterationLimit: return "ITERATION_LIMIT";
    case SolveStatus::Numerical: return "NUMERICAL";
  }
  return "NUMERICAL";
}

namespace {

const char* relation_text(Relation rel) {
  switch (rel) {
    case Relation::LessEqual: return "<=";
    case Relation::Equal: return "=";
    case Relation::GreaterEqual: return ">=";
  }
  return "=";
}

void append_number(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

}  // namespace

void write_lp_text(const LinearProgram& lp, std::ostream& os) {
  std::string line = "objective: ";
  line += lp.sense == Sense::Maximize ? "maximize" : "minimize";
  bool first = true;
  for (int col = 0; col < lp.num_cols(); ++col) {
    const double coef = lp.objective(col);
    if (coef == 0.0) continue;
    line += first ? " " : " + ";
    append_number(line, coef);
    line += "*" + lp.column_name(col);
    first = false;
  }
  if (first) line += " 0";
  if (lp.objective_constant != 0.0) {
    line += " + ";
    append_number(line, lp.objective_constant);
  }
  os << line << '\n';

  for (int row = 0; row < lp.num_rows(); ++row) {
    const auto& c = lp.constraint(row);
    line = "r" + std::to_string(row) + ":";
    bool first_term = true;
    for (const auto& [col, coef] : c.terms) {
      line += first_term ? " " : " + ";
      append_number(line, coef);
      line += "*" + lp.column_name(col);
      first_term = false;
    }
    if (first_term) line += " 0";
    line += " ";
    line += relation_text(c.relation);
    line += " ";
    append_number(line, c.rhs);
    os << line << '\n';
  }

  for (int col = 0; col < lp.num_cols(); ++col) {
    const double lo = lp.lower(col);
    const double hi = lp.upper(col);
    line = "bounds: " + lp.column_name(col) + " ";
    if (std::isinf(lo) && std::isinf(hi)) {
      line += "free";
    } else {
      line += "in [";
      if (std::isinf(lo)) line += "-inf";
      else append_number(line, lo);
      line += ", ";
      if (std::isinf(hi)) line += "+inf";
      else append_number(line, hi);
      line += "]";
    }
    os << line << '\n';
  }
}

}  // namespace owa::lp
