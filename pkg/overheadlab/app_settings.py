import os

from app_utils.django import clean_setting

from .constants import FormulaMode

# Default reading of the outer tier sum in the request-overhead formula
OVERHEADLAB_FORMULA_MODE = clean_setting(
    "OVERHEADLAB_FORMULA_MODE", str(FormulaMode.LITERAL), choices=FormulaMode.values
)

# Relative step and absolute floor for central finite differences
OVERHEADLAB_FD_RELATIVE_STEP = clean_setting("OVERHEADLAB_FD_RELATIVE_STEP", 1e-4)
OVERHEADLAB_FD_MIN_STEP = clean_setting("OVERHEADLAB_FD_MIN_STEP", 1e-6)

# Directory where commands write reports, CSV tables and traces
OVERHEADLAB_OUTPUT_DIR = clean_setting(
    "OVERHEADLAB_OUTPUT_DIR",
    os.environ.get("OVERHEADLAB_OUTPUT_DIR", "overheadlab-output"),
)

# Expanding ring search: first ring TTL, growth per ring and last ring TTL
OVERHEADLAB_TTL_START = clean_setting("OVERHEADLAB_TTL_START", 1, min_value=1)
OVERHEADLAB_TTL_INCREMENT = clean_setting("OVERHEADLAB_TTL_INCREMENT", 2, min_value=1)
OVERHEADLAB_TTL_THRESHOLD = clean_setting("OVERHEADLAB_TTL_THRESHOLD", 7, min_value=1)

# TTL of a network-wide flood
OVERHEADLAB_NETWORK_TTL = clean_setting("OVERHEADLAB_NETWORK_TTL", 35, min_value=1)

# Number of network-wide retries before buffered data is dropped
OVERHEADLAB_RREQ_RETRIES = clean_setting("OVERHEADLAB_RREQ_RETRIES", 2, min_value=0)

# Seconds to wait for a reply to a network-wide request
OVERHEADLAB_NET_TRAVERSAL_TIME = clean_setting("OVERHEADLAB_NET_TRAVERSAL_TIME", 2.8)

# Wait multiplier applied per network-wide retry
OVERHEADLAB_BACKOFF_MULTIPLIER = clean_setting("OVERHEADLAB_BACKOFF_MULTIPLIER", 2.0)

# Link monitoring with periodic HELLO messages
OVERHEADLAB_HELLO_INTERVAL = clean_setting("OVERHEADLAB_HELLO_INTERVAL", 1.0)
OVERHEADLAB_ALLOWED_HELLO_LOSS = clean_setting(
    "OVERHEADLAB_ALLOWED_HELLO_LOSS", 2, min_value=1
)

# Seconds a route stays valid after it was last used
OVERHEADLAB_ROUTE_LIFE_TIME = clean_setting("OVERHEADLAB_ROUTE_LIFE_TIME", 10.0)

# Seconds a seen route request is remembered for duplicate suppression
OVERHEADLAB_DUPLICATE_WINDOW = clean_setting("OVERHEADLAB_DUPLICATE_WINDOW", 6.0)

# Max number of data packets buffered per destination while a route is searched
OVERHEADLAB_BUFFER_SIZE = clean_setting("OVERHEADLAB_BUFFER_SIZE", 64, min_value=1)

# Seconds a sender waits for a per-hop ACK before declaring the link broken
OVERHEADLAB_ACK_TIMEOUT = clean_setting("OVERHEADLAB_ACK_TIMEOUT", 0.05)

# TTL added to the last known hop count when repairing a route locally
OVERHEADLAB_LOCAL_ADD_TTL = clean_setting("OVERHEADLAB_LOCAL_ADD_TTL", 2, min_value=0)
