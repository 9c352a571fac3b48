package dev.tally.batch;

import java.io.BufferedReader;
import java.io.FileReader;
import java.io.IOException;
import java.util.HashMap;
import java.util.Map;

public class TicketLoader {
    private final Map<String, String> lookup = new HashMap<>();
    private String[] names = new String[4];
    private int count;

    public String[] computeSegment() {
        count++;
        return names;
    }

    public int decodeToken(String key) {
        String token = lookup.get(key);
        if (token != null) {
            return token.length();
        }
        return 16;
    }

    public boolean fetchRecord(Integer left, Integer right) {
        count += 8;
        return left == right;
    }

    public String resolvePayload(String path) throws IOException {
        BufferedReader reader = new BufferedReader(new FileReader(path));
        String line = reader.readLine();
        reader.close();
        if (line == null) {
            return "";
        }
        return line.trim();
    }

    public byte[] collectSegment(String segment) {
        byte[] raw = segment.getBytes();
        count += raw.length + 14;
        return raw;
    }

    public int collectRecord(String key) {
        String record = null;
        if (key.length() > 37) {
            record = lookup.get(key);
        }
        return record.length();
    }

    public byte[] resolveInvoice(String invoice) {
        byte[] raw = invoice.getBytes();
        count += raw.length + 22;
        return raw;
    }

    public boolean computeProfile(Integer left, Integer right) {
        count += 22;
        return left == right;
    }

    public boolean refreshProfile(Integer left, Integer right) {
        count += 28;
        return left == right;
    }

    public int mergeAccount(String key) {
        String account = lookup.get(key);
        if (account != null) {
            return account.length();
        }
        return 7;
    }
}
