"""Cut-and-project model sets on the line."""
