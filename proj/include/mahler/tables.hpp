#pragma once

// Regeneration of the reference tables and cell-by-cell comparison against
// the golden copies in tables/.
//
//   1: phi.txt     Phi_{n,k}, 0 <= n, k <= 4, exact text
//   2: psi.txt     Psi_{r,a}, 2 <= a <= r <= 4, exact text; q.txt: Q_1, Q_2
//   3: table3.csv  c_r(n) of 1 + x + y, 2 <= r <= 10, n = 1, 2, 3; abs tol 5e-10
//   4: table4.csv  n^2 D_n and the next two scaled remainders for 1 + x + y,
//                  n = 1, 61, ..., 301; abs tol 1e-8

#include <map>
#include <string>
#include <vector>

namespace mahler {

struct TableDiff {
  std::string file;
  std::vector<std::string> mismatches;  // one line per differing cell
};

// File name -> contents (LF-terminated lines).
std::map<std::string, std::string> generate_table(int which, int prec, int jobs = 1);

// Compares generated contents against golden contents of the same file.
std::vector<std::string> compare_table(const std::string& file, const std::string& generated,
                                       const std::string& golden);

// Writes the generated files into out_dir and diffs them against golden_dir.
// Throws Error(kInvalidArgument) for an unknown table or unreadable file.
std::vector<TableDiff> run_tables(int which, const std::string& out_dir, const std::string& golden_dir,
                                  int prec, int jobs = 1);

const char* default_golden_dir();

}  // namespace mahler
