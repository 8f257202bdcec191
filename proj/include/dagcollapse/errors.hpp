#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dagcollapse {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Input edge set contains a directed cycle; carries one offending back edge.
class CycleDetected : public Error {
  public:
    CycleDetected(std::size_t from, std::size_t to, const std::string& context = "")
        : Error("cycle detected: back edge " + std::to_string(from) + " -> " +
                std::to_string(to) + (context.empty() ? "" : " (" + context + ")")),
          from(from), to(to) {}

    std::size_t from;
    std::size_t to;
};

class NodeIdOutOfRange : public Error {
  public:
    NodeIdOutOfRange(std::size_t id, std::size_t node_count)
        : Error("node id " + std::to_string(id) + " out of range [0, " +
                std::to_string(node_count) + ")") {}
};

class EmptyGraph : public Error {
  public:
    EmptyGraph() : Error("operation requires a non-empty graph") {}
};

class BudgetInfeasible : public Error {
  public:
    using Error::Error;
};

class ProfileInfeasible : public Error {
  public:
    using Error::Error;
};

class CapExceeded : public Error {
  public:
    CapExceeded(std::size_t actual, std::size_t cap)
        : Error("size " + std::to_string(actual) + " exceeds cap " + std::to_string(cap)) {}
};

class ZeroWalks : public Error {
  public:
    ZeroWalks() : Error("walk count must be positive") {}
};

class EmptyHistogram : public Error {
  public:
    EmptyHistogram() : Error("histogram holds no samples") {}
};

class DepthOutOfRange : public Error {
  public:
    DepthOutOfRange(std::size_t depth, std::size_t max_depth)
        : Error("depth " + std::to_string(depth) + " outside [2, " +
                std::to_string(max_depth) + "]") {}
};

class ParseError : public Error {
  public:
    ParseError(std::size_t line, const std::string& what)
        : Error("parse error at line " + std::to_string(line) + ": " + what), line(line) {}

    std::size_t line;
};

class SerializationError : public Error {
  public:
    using Error::Error;
};

}  // namespace dagcollapse
