#pragma once

#include <stdexcept>
#include <utility>
#include <string>

namespace lexseq {

class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class dimension_error : public error {
public:
    using error::error;
};

class parse_error : public error {
public:
    using error::error;
};

class degree_error : public error {
public:
    using error::error;
};

class unsupported_degree : public error {
public:
    using error::error;
};

/// Declared boundary lifts fail to span (or overdetermine) ker(i_*, j_*) one degree down.
class underdetermined_boundary : public error {
public:
    using error::error;
};

class inconsistent_scenario : public error {
public:
    using error::error;
};

class inconsistent_model : public error {
public:
    using error::error;
};

class contradiction_error : public error {
public:
    using error::error;
};

class wrong_rule : public error {
public:
    using error::error;
};

class unsupported_weights : public error {
public:
    using error::error;
};

/// Wraps a failure with the pipeline stage it surfaced in.
class stage_error : public error {
public:
    stage_error(std::string stage, const std::string& what)
        : error(stage + ": " + what), stage_(std::move(stage)) {}
    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

}  // namespace lexseq
