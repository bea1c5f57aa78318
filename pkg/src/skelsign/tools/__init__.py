"Command-line tools for inspecting sweep sessions."
