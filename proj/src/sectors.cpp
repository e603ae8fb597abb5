namespace tnsym {}
