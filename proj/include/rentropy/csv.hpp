#pragma once

#include <iosfwd>
#include <string>

#include "rentropy/types.hpp"

namespace rentropy {

// One sample per row, comma separated. A first row whose fields are not all
// numeric is treated as a header and skipped. Rows must agree on width.
SampleSet load_samples(std::istream& in);
SampleSet load_samples_file(const std::string& path);

// %.17g round-trip formatting for doubles.
std::string format_double(double v);

void write_matrix_csv(std::ostream& out, const RowMat& m);

}  // namespace rentropy
