#include "longtail/errors.h"

#include <fmt/format.h>
#include <fmt/ranges.h>

namespace longtail {

MalformedLine::MalformedLine(std::size_t line_no, const std::string& reason)
    : InputError(fmt::format("line {}: {}", line_no, reason)),
      line_no_(line_no) {}

DanglingReference::DanglingReference(const std::string& kind, std::uint64_t id,
                                     std::size_t line_no)
    : InputError(line_no > 0
                     ? fmt::format("line {}: dangling {} reference {}",
                                   line_no, kind, id)
                     : fmt::format("dangling {} reference {}", kind, id)) {}

DuplicateId::DuplicateId(const std::string& kind, std::uint64_t id,
                         std::size_t line_no)
    : InputError(line_no > 0
                     ? fmt::format("line {}: duplicate {} id {}", line_no,
                                   kind, id)
                     : fmt::format("duplicate {} id {}", kind, id)) {}

SelfLoop::SelfLoop(std::uint64_t view_id, std::size_t line_no)
    : InputError(
          fmt::format("line {}: self-loop on view {}", line_no, view_id)) {}

UnknownNode::UnknownNode(std::uint64_t id)
    : InputError(fmt::format("view {} is not in the graph", id)) {}

DisconnectedTerminals::DisconnectedTerminals(
    std::vector<std::uint32_t> unreachable)
    : InputError(fmt::format("terminals not reachable from the first terminal: {}",
                             fmt::join(unreachable, " "))),
      unreachable_(std::move(unreachable)) {}

}  // namespace longtail
