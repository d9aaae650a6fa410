#pragma once

// Everything except the HTTP layer (ccc/http_api.hpp), which pulls in httplib.

#include "ccc/dialog.hpp"
#include "ccc/dst_format.hpp"
#include "ccc/errors.hpp"
#include "ccc/eval.hpp"
#include "ccc/frame.hpp"
#include "ccc/io.hpp"
#include "ccc/lexicon.hpp"
#include "ccc/linear_frame.hpp"
#include "ccc/memory_graph.hpp"
#include "ccc/nlu.hpp"
#include "ccc/rng.hpp"
#include "ccc/session.hpp"
#include "ccc/simulator.hpp"
#include "ccc/story_engine.hpp"
