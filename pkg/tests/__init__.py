# Tests for boxproj
