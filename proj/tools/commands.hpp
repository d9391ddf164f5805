#pragma once

#include <iosfwd>

#include "config.hpp"

// Subcommand bodies, stream-based so tests can drive them in memory.  Each
// returns the process exit code: 0 success, 1 failed check, 2 bad input.
namespace fcd::cli {

int cmd_encode(std::istream& in, std::ostream& out, std::ostream& err,
               const Config& cfg);
int cmd_decode(std::istream& in, std::ostream& out, std::ostream& err,
               const Config& cfg);
int cmd_match(std::istream& pred, std::istream& gt, std::ostream& out,
              std::ostream& err, const Config& cfg);
int cmd_nms(std::istream& in, std::ostream& out, std::ostream& err,
            const Config& cfg);
int cmd_eval(std::istream& pred, std::istream& gt, std::ostream& out,
             std::ostream& err, const Config& cfg);
int cmd_grad_check(std::ostream& out, std::ostream& err, const Config& cfg);
int cmd_attn_check(std::ostream& out, std::ostream& err, const Config& cfg);

}  // namespace fcd::cli
