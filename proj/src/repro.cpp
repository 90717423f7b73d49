namespace betalab {}
