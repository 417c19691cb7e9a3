#pragma once

// Library identity, embedded in every report for provenance of numeric output.
#define LILAB_VERSION "1.0.0"
