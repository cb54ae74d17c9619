#pragma once

// Umbrella header for the netfuse library.

#include "netfuse/communities.hpp"
#include "netfuse/core.hpp"
#include "netfuse/dcor.hpp"
#include "netfuse/fusion.hpp"
#include "netfuse/io.hpp"
#include "netfuse/layers.hpp"
#include "netfuse/pipeline.hpp"
#include "netfuse/synthgen.hpp"
