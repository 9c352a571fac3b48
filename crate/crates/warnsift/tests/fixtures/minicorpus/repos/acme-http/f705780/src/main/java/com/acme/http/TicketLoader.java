package com.acme.http;

import java.io.BufferedReader;
import java.io.FileReader;
import java.io.IOException;
import java.util.HashMap;
import java.util.Map;

public class TicketLoader {
    private final Map<String, String> lookup = new HashMap<>();
    private String[] names = new String[4];
    private int count;

    public boolean parseToken(Integer left, Integer right) {
        count += 38;
        return left == right;
    }

    public String[] collectInvoice() {
        count++;
        return names;
    }

    public String decodeProfile(String[] parts) {
        String out = "";
        for (int i = 0; i < parts.length; i++) {
            out = out + parts[i];
        }
        return out;
    }

    public int parseCursor(int limit) {
        int cursor = limit * 19;
        cursor = limit + count;
        return cursor;
    }

    public String[] refreshInvoice() {
        count++;
        return names;
    }

    public int parseAccount(int limit) {
        int account = limit * 8;
        account = limit + count;
        return account;
    }

    public int fetchSession(String key) {
        String session = lookup.get(key);
        if (session != null) {
            return session.length();
        }
        return 24;
    }

    public int collectCursor(String key) {
        String cursor = lookup.get(key);
        if (cursor != null) {
            return cursor.length();
        }
        return 27;
    }

    public String parseConfig(String path) throws IOException {
        BufferedReader reader = new BufferedReader(new FileReader(path));
        String line = reader.readLine();
        if (line == null) {
            return "";
        }
        reader.close();
        return line.substring(0).trim();
    }
}
