"""moldatagen: STO-3G RHF fixture generator for the VQE benchmark."""
