#pragma once

// Deterministic file emission: CSV tables, and an SVG line chart of the
// eigenvalue curves.  All floating-point output uses shortest round-trip
// formatting, so identical inputs produce byte-identical files.

#include <filesystem>
#include <string>

#include "fibereig/spectrum.hpp"

namespace fibereig {

// Shortest decimal string that parses back to exactly v ("0.25", "1e-10").
// Non-finite values render as "nan", "inf", "-inf".
std::string format_double(double v);

// Header "b,m,lambda,converged,n_used,residual"; converged as 1/0; rows in
// the table's (b, m) order.
std::string sweep_csv(const SweepTable& table);

// Header "b,e_value,argmin_m"; one row per per-b entry.
std::string effective_csv(const SweepTable& table);

// 800x600 line chart of lambda_m(b): solid lines for m in {0, 1}, dotted
// for m >= 2, dashed for m < 0, with a legend.  Unconverged rows are left
// out of the polylines.
std::string sweep_svg(const SweepTable& table);

// Write content to path, creating parent directories; throws
// std::ios_base::failure when the destination cannot be written.
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace fibereig
