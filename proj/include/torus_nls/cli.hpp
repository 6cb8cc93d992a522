#pragma once

namespace tnls {

// Exit codes: 0 success or pass, 1 verdict fail, 2 usage error, 3 numerical error.
int cli_main(int argc, char** argv);

}  // namespace tnls
