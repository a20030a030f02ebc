#pragma once

#include "ratreg/problems.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace ratreg {

/// Matrix Market array format (%%MatrixMarket matrix array real general).
void writeMatrixMarket(std::ostream& os, const Matrix& a);
Matrix readMatrixMarket(std::istream& is);

/// Single-column CSV, one value per line, %.17g formatting.
void writeVectorCsv(std::ostream& os, const Vector& v);
Vector readVectorCsv(std::istream& is);

/// Problem bundle directory: problem.json (metadata plus inline sigma for
/// diagonal operators), operator.mtx for dense operators, x_true.csv,
/// y_exact.csv, y_noisy.csv.
void saveProblemBundle(const std::filesystem::path& dir, const InverseProblem& problem,
                       const std::string& type, double shape_param);
InverseProblem loadProblemBundle(const std::filesystem::path& dir);

std::string formatDouble(double v);

}  // namespace ratreg
