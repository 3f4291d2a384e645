"""q-deformed quiver algebras: relations, identities and certificates."""
