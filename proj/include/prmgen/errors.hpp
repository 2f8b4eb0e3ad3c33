#pragma once

#include <stdexcept>
#include <string>

namespace prmgen {

// A rejection loop ran out of budget before producing an acceptable sample.
class RejectionBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A graph that must be acyclic turned out to contain a cycle.
class CyclicGraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inputs that disagree about the schema they were built for.
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace prmgen

namespace prmgen {

// A weighted draw was asked to choose from an empty candidate list.
class NoCandidateError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace prmgen
