#pragma once

#include <stdexcept>
#include <string>

namespace mrbench {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed file or document. `context` names the line or field.
class ParseError : public Error {
public:
    ParseError(const std::string& context, const std::string& what)
        : Error(context.empty() ? what : context + ": " + what), context_(context), message_(what) {}
    const std::string& context() const noexcept { return context_; }
    const std::string& message() const noexcept { return message_; }

private:
    std::string context_;
    std::string message_;
};

/// A record refers to something that does not exist (sut_id, binding, variant).
class ReferenceError : public Error {
public:
    using Error::Error;
};

/// An operation was called outside its documented domain.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Network or endpoint failure talking to the LLM service.
class TransportError : public Error {
public:
    TransportError(const std::string& what, bool retriable, int status = 0)
        : Error(what), retriable_(retriable), status_(status) {}
    bool retriable() const noexcept { return retriable_; }
    int status() const noexcept { return status_; }

private:
    bool retriable_;
    int status_;
};

}  // namespace mrbench
