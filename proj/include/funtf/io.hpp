#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "funtf/frames.hpp"
#include "funtf/linalg.hpp"

namespace funtf {

// Shortest decimal form that parses back to the same double (at most 17
// significant digits).
std::string format_real(double v);

// Whole-file atomic write: the content lands under a temporary name first
// and is renamed into place, so readers never observe a partial file.
void write_text_file(const std::filesystem::path& path, const std::string& content);

// Matrix file: first line the dimension n, then n rows of n reals. The
// parsed matrix must be symmetric within 1e-9 entrywise.
SymMatrix read_matrix_file(const std::filesystem::path& path);
void write_matrix_file(const std::filesystem::path& path, const SymMatrix& m);

// Frame file: first line "dim count", then count rows of dim reals, each row
// unit within 1e-6.
UnitVectorSystem read_frame_file(const std::filesystem::path& path);
void write_frame_file(const std::filesystem::path& path, const UnitVectorSystem& sys);

// Same shape as a frame file but without the unit-norm requirement; used for
// the ellipsoid points, whose rows have norm rho, not 1.
void write_points_file(const std::filesystem::path& path, std::size_t dim,
                       const std::vector<Vec>& rows);

}  // namespace funtf
