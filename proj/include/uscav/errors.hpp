// errors.hpp — exception types shared by all modules
#pragma once

#include <stdexcept>
#include <string>
#include <complex>
#include <vector>

namespace uscav {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// bad argument value (omega <= 0, temperature <= 0, ...)
class DomainError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    ConfigError(const std::string& msg, int line = 0, std::string field = {})
        : Error(format(msg, line, field)), line_(line), field_(std::move(field)) {}
    int line() const { return line_; }
    const std::string& field() const { return field_; }

private:
    static std::string format(const std::string& msg, int line, const std::string& field) {
        std::string out;
        if (line > 0) out += "line " + std::to_string(line) + ": ";
        if (!field.empty()) out += "'" + field + "': ";
        return out + msg;
    }
    int line_;
    std::string field_;
};

class SingularPointError : public Error {
public:
    SingularPointError(const std::string& msg, double omega)
        : Error(msg), omega_(omega) {}
    double omega() const { return omega_; }

private:
    double omega_;
};

class RootFailureError : public Error {
public:
    RootFailureError(const std::string& msg, std::complex<double> last, double residual)
        : Error(msg), last_(last), residual_(residual) {}
    std::complex<double> last_iterate() const { return last_; }
    double residual() const { return residual_; }

private:
    std::complex<double> last_;
    double residual_;
};

class DegenerateInputError : public Error {
public:
    using Error::Error;
};

// steady state not unique; candidates holds the near-zero singular values found
class AmbiguityError : public Error {
public:
    AmbiguityError(const std::string& msg, std::vector<double> candidates)
        : Error(msg), candidates_(std::move(candidates)) {}
    const std::vector<double>& candidates() const { return candidates_; }

private:
    std::vector<double> candidates_;
};

class IntegrationError : public Error {
public:
    IntegrationError(const std::string& msg, double time, double step)
        : Error(msg), time_(time), step_(step) {}
    double time() const { return time_; }
    double step() const { return step_; }

private:
    double time_;
    double step_;
};

} // namespace uscav
