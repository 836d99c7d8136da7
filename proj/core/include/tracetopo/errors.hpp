#pragma once

#include <stdexcept>
#include <string>

namespace tracetopo {

// Error taxonomy shared by the library and the CLI exit-code mapping:
// config = 1, data = 2, numeric = 3. Every message names the module it
// came from so failures in a long pipeline are attributable.
class Error : public std::runtime_error {
public:
    Error(std::string module, const std::string& message)
        : std::runtime_error("[" + module + "] " + message), module_(std::move(module)) {}

    const std::string& module() const noexcept { return module_; }

private:
    std::string module_;
};

// Bad flags, bad config files, out-of-range parameters.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Malformed or inconsistent input data (chains, embeddings, fixtures,
// service responses).
class DataError : public Error {
public:
    using Error::Error;
};

// Numerical failures: non-convergence, asymmetric input to the
// eigensolver, non-finite values produced where finite ones are required.
class NumericError : public Error {
public:
    using Error::Error;
};

// Broken internal invariants (e.g. a filtration handed to the reduction
// with cofaces before faces). Never expected in correct use.
class InternalError : public Error {
public:
    using Error::Error;
};

}  // namespace tracetopo
