#include "ratreg/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ratreg {

namespace fs = std::filesystem;
using nlohmann::json;

std::string formatDouble(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void writeMatrixMarket(std::ostream& os, const Matrix& a) {
  os << "%%MatrixMarket matrix array real general\n";
  os << a.rows() << ' ' << a.cols() << '\n';
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i) os << formatDouble(a(i, j)) << '\n';
}

Matrix readMatrixMarket(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("%%MatrixMarket", 0) != 0)
    throw std::runtime_error("missing MatrixMarket header");
  if (line.find("array") == std::string::npos || line.find("real") == std::string::npos)
    throw std::runtime_error("only the dense real array format is supported");
  do {
    if (!std::getline(is, line)) throw std::runtime_error("truncated MatrixMarket file");
  } while (!line.empty() && line[0] == '%');
  std::istringstream dims(line);
  Eigen::Index rows = 0, cols = 0;
  dims >> rows >> cols;
  if (rows < 1 || cols < 1) throw std::runtime_error("invalid MatrixMarket dimensions");
  Matrix a(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      if (!(is >> a(i, j))) throw std::runtime_error("truncated MatrixMarket data");
    }
  }
  return a;
}

void writeVectorCsv(std::ostream& os, const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) os << formatDouble(v[i]) << '\n';
}

Vector readVectorCsv(std::istream& is) {
  std::vector<double> values;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    values.push_back(std::stod(line));
  }
  Vector v(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) v[static_cast<Eigen::Index>(i)] = values[i];
  return v;
}

namespace {

void writeTextFile(const fs::path& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os << content;
}

std::string vectorCsvString(const Vector& v) {
  std::ostringstream os;
  writeVectorCsv(os, v);
  return os.str();
}

}  // namespace

void saveProblemBundle(const fs::path& dir, const InverseProblem& problem,
                       const std::string& type, double shape_param) {
  fs::create_directories(dir);

  json meta;
  meta["type"] = type;
  meta["m"] = problem.y_noisy.size();
  meta["delta"] = problem.delta;
  meta["seed"] = problem.seed;
  if (problem.mu) meta["mu"] = *problem.mu;
  if (type == "diagonal") {
    meta["s"] = shape_param;
    const auto* diag = dynamic_cast<const DiagonalOperator*>(problem.op.get());
    if (diag == nullptr) throw std::invalid_argument("diagonal bundle needs a diagonal operator");
    json op;
    op["type"] = "diagonal";
    op["sigma"] = std::vector<double>(diag->singularValues().begin(), diag->singularValues().end());
    meta["operator"] = op;
  } else {
    meta["d"] = shape_param;
    const auto* dense = dynamic_cast<const DenseOperator*>(problem.op.get());
    if (dense == nullptr) throw std::invalid_argument("dense bundle needs a dense operator");
    std::ostringstream os;
    writeMatrixMarket(os, dense->entries());
    writeTextFile(dir / "operator.mtx", os.str());
  }
  if (problem.w.size() > 0) meta["w"] = std::vector<double>(problem.w.begin(), problem.w.end());

  writeTextFile(dir / "problem.json", meta.dump(2) + "\n");
  writeTextFile(dir / "x_true.csv", vectorCsvString(problem.x_true));
  writeTextFile(dir / "y_exact.csv", vectorCsvString(problem.y_exact));
  writeTextFile(dir / "y_noisy.csv", vectorCsvString(problem.y_noisy));
}

InverseProblem loadProblemBundle(const fs::path& dir) {
  std::ifstream meta_file(dir / "problem.json");
  if (!meta_file) throw std::runtime_error("missing problem.json in " + dir.string());
  json meta = json::parse(meta_file);

  InverseProblem problem;
  problem.delta = meta.value("delta", 0.0);
  problem.seed = meta.value("seed", std::uint64_t{0});
  if (meta.contains("mu")) problem.mu = meta["mu"].get<double>();
  if (meta.contains("w")) {
    const auto w = meta["w"].get<std::vector<double>>();
    problem.w.resize(static_cast<Eigen::Index>(w.size()));
    for (std::size_t i = 0; i < w.size(); ++i) problem.w[static_cast<Eigen::Index>(i)] = w[i];
  }

  if (meta.contains("operator") && meta["operator"].value("type", "") == "diagonal") {
    const auto sigma = meta["operator"]["sigma"].get<std::vector<double>>();
    Vector s(static_cast<Eigen::Index>(sigma.size()));
    for (std::size_t i = 0; i < sigma.size(); ++i) s[static_cast<Eigen::Index>(i)] = sigma[i];
    problem.op = std::make_shared<DiagonalOperator>(std::move(s));
  } else {
    std::ifstream op_file(dir / "operator.mtx");
    if (!op_file) throw std::runtime_error("missing operator.mtx in " + dir.string());
    problem.op = std::make_shared<DenseOperator>(readMatrixMarket(op_file));
  }

  const auto readVec = [&](const char* name) {
    std::ifstream f(dir / name);
    if (!f) throw std::runtime_error(std::string("missing ") + name + " in " + dir.string());
    return readVectorCsv(f);
  };
  problem.x_true = readVec("x_true.csv");
  problem.y_exact = readVec("y_exact.csv");
  problem.y_noisy = readVec("y_noisy.csv");
  return problem;
}

}  // namespace ratreg
