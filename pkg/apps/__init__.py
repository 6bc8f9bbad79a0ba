"""应用模块包."""
