#pragma once

#include <iosfwd>
#include <string>

#include "sacre/mining/dataset.hpp"

namespace sacre::mining {

struct ArffError : std::runtime_error {
  int line;
  ArffError(int line_number, const std::string& what)
      : std::runtime_error("arff: line " + std::to_string(line_number) + ": " + what),
        line(line_number) {}
};

struct ArffHeaderError : ArffError { using ArffError::ArffError; };
struct ArffAttributeKindError : ArffError { using ArffError::ArffError; };
struct ArffArityError : ArffError { using ArffError::ArffError; };

// "@relation <name>", one "@attribute" line per attribute, "@data", then
// comma-separated rows. '.' decimal separator, no quoting, LF endings,
// '%' comment lines ignored on read.
void arff_write(const Dataset& ds, std::ostream& out);
void arff_write_file(const Dataset& ds, const std::string& path);

Dataset arff_read(std::istream& in);
Dataset arff_read_file(const std::string& path);

}  // namespace sacre::mining
