#pragma once

#include <iosfwd>
#include <string>

#include "excursion/grid.hpp"

namespace excursion::io {

// Plain PBM ("P1"). The second line is `# t=<t> epsilon=<eps>`; rows are
// written top (j = M-1) to bottom so the file displays upright. 1 = black =
// excursion pixel.
void write_pbm(std::ostream& out, const BinaryField& field);
BinaryField read_pbm(std::istream& in);
void save_pbm(const std::string& path, const BinaryField& field);
BinaryField load_pbm(const std::string& path);

// GRF1: one ASCII header line
//   GRF1 rows=<M> cols=<M> t=<t> epsilon=<eps>\n
// then M*M little-endian IEEE-754 doubles in storage order (row j = 0 first,
// i ascending within a row).
void write_grf1(std::ostream& out, const ScalarField& field);
ScalarField read_grf1(std::istream& in);
void save_grf1(const std::string& path, const ScalarField& field);
ScalarField load_grf1(const std::string& path);

/// Shortest decimal text that reads back to the same double.
std::string format_decimal(double x);

}  // namespace excursion::io
