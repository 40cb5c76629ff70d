#ifndef PVRING_ERRORS_HPP
#define PVRING_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pvring {

// Base class for everything this engine throws on purpose.
struct engine_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input text (problem files, polynomial expressions).
struct parse_error : engine_error {
    parse_error(std::string msg, int line, int col)
        : engine_error(std::to_string(line) + ":" + std::to_string(col) + ": " + msg),
          line(line),
          col(col) {}
    int line;
    int col;
};

// A mathematically ill-posed request (zero denominator, singular matrix, ...).
struct domain_error : engine_error {
    using engine_error::engine_error;
};

// API misuse: mixed rings, mismatched orders, wrong levels.
struct usage_error : engine_error {
    using engine_error::engine_error;
};

// The computation budget (S-pair reductions, degree cap) ran out.
// Never a wrong answer: the caller learns that no answer was produced.
struct budget_error : engine_error {
    using engine_error::engine_error;
};

// A request the engine refuses to guess at (e.g. constants search on an
// infinite-dimensional quotient).
struct unsupported_error : engine_error {
    using engine_error::engine_error;
};

} // namespace pvring

#endif
