# Tests module



