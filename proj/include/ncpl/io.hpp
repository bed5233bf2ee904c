// io.hpp — matrix exchange format and filtration descriptors.
//
// Operators travel as structured text {dim, structure, entries} with entries
// serialized row-major as [re, im] pairs printed to 17 significant digits,
// so a round trip is bit-exact for doubles.

#pragma once

#include <string>

#include "ncpl/condexp.hpp"

namespace ncpl {

struct IoError : Error {
    explicit IoError(const std::string& what) : Error(what) {}
};

// Shortest decimal that round-trips the double (up to 17 significant digits).
std::string format_real(double v);

std::string operator_to_json(const Operator& x);
Operator operator_from_json(const std::string& text);

std::string filtration_to_json(const Filtration& f);
Filtration filtration_from_json(const std::string& text);

// Filtration descriptor plus the element list in the matrix format.
std::string martingale_to_json(const Martingale& m);
Martingale martingale_from_json(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace ncpl
