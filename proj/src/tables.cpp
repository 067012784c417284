#include "mahler/tables.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "mahler/error.hpp"
#include "mahler/exactalg.hpp"
#include "mahler/expansion.hpp"
#include "mahler/mahler.hpp"

namespace mahler {

namespace {

const long kTable4Ns[] = {1, 61, 121, 181, 241, 301};

BiPoly one_plus_x_plus_y() {
  return BiPoly(std::map<BiPoly::Key, GaussRational>{{{0, 0}, 1}, {{1, 0}, 1}, {{0, 1}, 1}});
}

std::string phi_text() {
  std::ostringstream out;
  for (unsigned n = 0; n <= 4; ++n) {
    for (unsigned k = 0; k <= 4; ++k) out << "Phi[" << n << ',' << k << "] = " << phi_poly(n, k).to_string() << '\n';
  }
  return out.str();
}

std::string psi_text() {
  std::ostringstream out;
  for (unsigned r = 2; r <= 4; ++r) {
    for (unsigned a = 2; a <= r; ++a) out << "Psi[" << r << ',' << a << "] = " << psi_poly(r, a).to_string() << '\n';
  }
  return out.str();
}

std::string q_text() {
  std::ostringstream out;
  for (unsigned n = 1; n <= 2; ++n) out << "Q[" << n << "] = " << q_poly(n).to_string() << '\n';
  return out.str();
}

std::string table3_text(int prec) {
  const ExpansionContext ctx(one_plus_x_plus_y(), prec);
  std::ostringstream out;
  out << "r,c_r(1),c_r(2),c_r(3)\n";
  for (int r = 2; r <= 10; ++r) {
    out << r;
    for (long n = 1; n <= 3; ++n) out << ',' << ctx.coefficient(r, n).to_fixed(10);
    out << '\n';
  }
  return out.str();
}

std::string table4_text(int prec, int jobs) {
  const BiPoly p = one_plus_x_plus_y();
  const ExpansionContext ctx(p, prec);
  MeasureOptions opts;
  opts.jobs = jobs;
  const MeasureResult base = mahler_bivariate(p, prec, opts);
  const std::vector<long> ns(std::begin(kTable4Ns), std::end(kTable4Ns));
  const std::vector<MeasureResult> d = delta_sweep(p, ns, base, prec, opts);
  std::ostringstream out;
  out << "n,n^2*D,n^3*(D-c2/n^2),n^4*(D-c2/n^2-c3/n^3)\n";
  for (std::size_t k = 0; k < ns.size(); ++k) {
    const long n = ns[k];
    const Real c2 = ctx.coefficient(2, n);
    const Real c3 = ctx.coefficient(3, n);
    const Real n2 = Real(n * n, prec);
    const Real col2 = d[k].value * n2;
    const Real col3 = (col2 - c2) * n;
    const Real col4 = (col3 - c3) * n;
    out << n << ',' << col2.to_fixed(10) << ',' << col3.to_fixed(10) << ',' << col4.to_fixed(10) << '\n';
  }
  return out.str();
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string cell;
  while (std::getline(in, cell, ',')) out.push_back(cell);
  return out;
}

std::vector<std::string> compare_text(const std::string& generated, const std::string& golden) {
  std::map<std::string, std::string> want, got;
  auto split = [](const std::string& s, std::map<std::string, std::string>& into) {
    for (const auto& line : lines_of(s)) {
      const auto eq = line.find(" = ");
      if (eq == std::string::npos) {
        into[line] = "";
      } else {
        into[line.substr(0, eq)] = line.substr(eq + 3);
      }
    }
  };
  split(generated, got);
  split(golden, want);
  std::vector<std::string> diffs;
  for (const auto& [name, value] : want) {
    const auto it = got.find(name);
    if (it == got.end()) {
      diffs.push_back(name + ": missing");
    } else if (it->second != value) {
      diffs.push_back(name + ": got " + it->second + ", expected " + value);
    }
  }
  for (const auto& [name, value] : got) {
    if (!want.count(name)) diffs.push_back(name + ": unexpected");
  }
  return diffs;
}

std::vector<std::string> compare_csv(const std::string& generated, const std::string& golden, double tol) {
  const auto got = lines_of(generated);
  const auto want = lines_of(golden);
  std::vector<std::string> diffs;
  if (got.size() != want.size()) {
    diffs.push_back("row count " + std::to_string(got.size()) + ", expected " + std::to_string(want.size()));
    return diffs;
  }
  if (got.empty()) return diffs;
  if (got[0] != want[0]) diffs.push_back("header: got " + got[0] + ", expected " + want[0]);
  const auto header = split_csv(want[0]);
  for (std::size_t row = 1; row < want.size(); ++row) {
    const auto g = split_csv(got[row]);
    const auto w = split_csv(want[row]);
    if (g.size() != w.size() || g.empty()) {
      diffs.push_back("row " + std::to_string(row) + ": column count");
      continue;
    }
    if (g[0] != w[0]) diffs.push_back("row " + std::to_string(row) + ": key " + g[0] + ", expected " + w[0]);
    for (std::size_t col = 1; col < w.size(); ++col) {
      const double a = std::strtod(g[col].c_str(), nullptr);
      const double b = std::strtod(w[col].c_str(), nullptr);
      if (!(std::abs(a - b) <= tol)) {
        std::ostringstream msg;
        msg << w[0] << ' ' << (col < header.size() ? header[col] : std::to_string(col)) << ": got " << g[col]
            << ", expected " << w[col] << " (diff " << std::abs(a - b) << ", tol " << tol << ')';
        diffs.push_back(msg.str());
      }
    }
  }
  return diffs;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kInvalidArgument, "cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kInvalidArgument, "cannot write " + path);
  out << contents;
}

}  // namespace

std::map<std::string, std::string> generate_table(int which, int prec, int jobs) {
  switch (which) {
    case 1:
      return {{"phi.txt", phi_text()}};
    case 2:
      return {{"psi.txt", psi_text()}, {"q.txt", q_text()}};
    case 3:
      return {{"table3.csv", table3_text(prec)}};
    case 4:
      return {{"table4.csv", table4_text(prec, jobs)}};
    default:
      fail(ErrorCode::kInvalidArgument, "unknown table " + std::to_string(which) + " (expected 1-4)");
  }
}

std::vector<std::string> compare_table(const std::string& file, const std::string& generated,
                                       const std::string& golden) {
  if (file == "table3.csv") return compare_csv(generated, golden, 5e-10);
  if (file == "table4.csv") return compare_csv(generated, golden, 1e-8);
  return compare_text(generated, golden);
}

std::vector<TableDiff> run_tables(int which, const std::string& out_dir, const std::string& golden_dir,
                                  int prec, int jobs) {
  std::vector<TableDiff> out;
  for (const auto& [file, contents] : generate_table(which, prec, jobs)) {
    write_file(out_dir + "/" + file, contents);
    out.push_back({file, compare_table(file, contents, read_file(golden_dir + "/" + file))});
  }
  return out;
}

const char* default_golden_dir() {
#ifdef MAHLER_GOLDEN_DIR
  return MAHLER_GOLDEN_DIR;
#else
  return "tables";
#endif
}

}  // namespace mahler
